use std::str::FromStr;

use hoytlab::{from_db, EtaMuFormat, EtaMuModel, Interferer, KappaMuModel};

use crate::error::CliError;

const KEYS: &str =
    "kind=eta_mu|kappa_mu, format=1|2 (eta_mu), eta (eta_mu), kappa (kappa_mu), mu, inr_db";

/// An interferer as written on the command line, e.g.
/// `kind=eta_mu,format=2,eta=0.04,mu=0.5,inr_db=5`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfererSpec {
    pub kind: Kind,
    pub mu: f64,
    /// `inr_db` when given; otherwise the command's `--inr-db`.
    pub inr_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    EtaMu { format: EtaMuFormat, eta: f64 },
    KappaMu { kappa: f64 },
}

fn bad(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid interferer: {msg}; accepted keys: {KEYS}"))
}

impl FromStr for InterfererSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut kind = None;
        let (mut format, mut eta, mut kappa, mut mu, mut inr_db) = (None, None, None, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("'{part}' is not key=value")))?;
            let (k, v) = (k.trim(), v.trim());
            let number = || {
                v.parse::<f64>()
                    .map_err(|_| bad(format!("{k}='{v}' is not a number")))
            };
            match k {
                "kind" => kind = Some(v.to_string()),
                "format" => {
                    format = Some(match v {
                        "1" => EtaMuFormat::One,
                        "2" => EtaMuFormat::Two,
                        _ => return Err(bad(format!("format must be 1 or 2, got '{v}'"))),
                    })
                }
                "eta" => eta = Some(number()?),
                "kappa" => kappa = Some(number()?),
                "mu" => mu = Some(number()?),
                "inr_db" => inr_db = Some(number()?),
                _ => return Err(bad(format!("unknown key '{k}'"))),
            }
        }
        let mu = mu.ok_or_else(|| bad("missing mu"))?;
        let kind = match kind.as_deref() {
            Some("eta_mu") => {
                if kappa.is_some() {
                    return Err(bad("kappa does not apply to eta_mu"));
                }
                Kind::EtaMu {
                    format: format.unwrap_or(EtaMuFormat::Two),
                    eta: eta.ok_or_else(|| bad("missing eta"))?,
                }
            }
            Some("kappa_mu") => {
                if eta.is_some() || format.is_some() {
                    return Err(bad("eta and format do not apply to kappa_mu"));
                }
                Kind::KappaMu {
                    kappa: kappa.ok_or_else(|| bad("missing kappa"))?,
                }
            }
            Some(other) => return Err(bad(format!("unknown kind '{other}'"))),
            None => return Err(bad("missing kind")),
        };
        Ok(Self { kind, mu, inr_db })
    }
}

impl InterfererSpec {
    /// Interferer with mean INR from the spec, or `default_inr_db`.
    pub fn build(&self, default_inr_db: f64) -> Result<Interferer, CliError> {
        let inr = from_db(self.inr_db.unwrap_or(default_inr_db));
        Ok(match self.kind {
            Kind::EtaMu { format, eta } => {
                Interferer::EtaMu(EtaMuModel::new(format, eta, self.mu, inr)?)
            }
            Kind::KappaMu { kappa } => Interferer::KappaMu(KappaMuModel::new(kappa, self.mu, inr)?),
        })
    }

    /// Short label for CSV output, e.g. `eta_mu(f2;eta=0.04;mu=0.5)`.
    pub fn label(&self) -> String {
        let g = |v: f64| crate::format::fmt_g(v, 6);
        let base = match self.kind {
            Kind::EtaMu { format, eta } => {
                let f = if format == EtaMuFormat::One { 1 } else { 2 };
                format!("eta_mu(f{f};eta={};mu={}", g(eta), g(self.mu))
            }
            Kind::KappaMu { kappa } => format!("kappa_mu(kappa={};mu={}", g(kappa), g(self.mu)),
        };
        match self.inr_db {
            Some(i) => format!("{base};inr_db={})", g(i)),
            None => format!("{base})"),
        }
    }
}
