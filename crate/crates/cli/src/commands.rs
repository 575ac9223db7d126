use hoytlab::metrics::{
    capacity_high_snr_asymptote, capacity_loss_mu, capacity_lower_bound, capacity_ora_hoyt,
    outage_probability, outage_with_interference, prob_positive_secrecy, secrecy_outage,
    OutageForm, OutageScenario, SecrecyForm, SecrecyScenario,
};
use hoytlab::montecarlo::{estimate_metric, McKind, McMetric};
use hoytlab::special::{kernel_quadrature, rice_ie_with, IeRepresentation};
use hoytlab::{from_db, HoytChannel, InterferenceSet, Interferer, McEstimate, QuadratureSpec};

use crate::args::{
    CapacityArgs, IeTableArgs, McArgs, OutageArgs, SecrecyArgs, SecrecyFormArg, SweepArgs,
};
use crate::error::{usage, CliError};
use crate::format::{num, Table};
use crate::interferer::InterfererSpec;
use crate::sweep::{SweepSpec, SweepVar};

/// Resolves the sweep flags against a command's allowed variables; the first
/// entry of `allowed` is the default, each with its default range.
fn resolve_sweep(
    args: &SweepArgs,
    allowed: &[(SweepVar, f64, f64, usize)],
) -> Result<SweepSpec, CliError> {
    let var = args.sweep.unwrap_or(allowed[0].0);
    let Some(&(_, start, stop, points)) = allowed.iter().find(|a| a.0 == var) else {
        let names: Vec<_> = allowed.iter().map(|a| a.0.name()).collect();
        return usage(format!(
            "this command cannot sweep {var}; expected one of {}",
            names.join(", ")
        ));
    };
    SweepSpec::new(
        var,
        args.start.unwrap_or(start),
        args.stop.unwrap_or(stop),
        args.points.unwrap_or(points),
        args.scale,
    )
}

fn channel(gamma_bar: f64, q: f64) -> Result<HoytChannel, CliError> {
    Ok(HoytChannel::new(gamma_bar, q)?)
}

fn nonempty<T>(v: &[T], flag: &str) -> Result<(), CliError> {
    if v.is_empty() {
        return usage(format!("{flag} needs at least one value"));
    }
    Ok(())
}

pub fn capacity(a: &CapacityArgs, quad: &QuadratureSpec) -> Result<Table, CliError> {
    let sweep = resolve_sweep(
        &a.sweep,
        &[
            (SweepVar::SnrDb, -10.0, 40.0, 51),
            (SweepVar::Q, 0.0, 1.0, 101),
        ],
    )?;
    let mut t = Table::new(&[
        "gamma_bar_db",
        "q",
        "capacity_bps_hz",
        "lower_bound",
        "high_snr_asymptote",
        "capacity_loss_mu",
    ]);
    let mut row = |db: f64, q: f64| -> Result<(), CliError> {
        let ch = channel(from_db(db), q)?;
        let lb = if q > 0.0 {
            num(capacity_lower_bound(&ch)?)
        } else {
            String::new()
        };
        t.push(vec![
            num(db),
            num(q),
            num(capacity_ora_hoyt(&ch, quad)?),
            lb,
            num(capacity_high_snr_asymptote(&ch)?),
            num(capacity_loss_mu(q)?),
        ]);
        Ok(())
    };
    if sweep.variable == SweepVar::Q {
        nonempty(&a.snr_db, "--snr-db")?;
        for &db in &a.snr_db {
            for q in sweep.values() {
                row(db, q)?;
            }
        }
    } else {
        nonempty(&a.q, "--q")?;
        for &q in &a.q {
            for db in sweep.values() {
                row(db, q)?;
            }
        }
    }
    Ok(t)
}

pub fn secrecy(a: &SecrecyArgs, quad: &QuadratureSpec) -> Result<Table, CliError> {
    let sweep = resolve_sweep(
        &a.sweep,
        &[
            (SweepVar::SnrDb, -10.0, 40.0, 51),
            (SweepVar::RateThreshold, 0.0, 2.0, 41),
        ],
    )?;
    nonempty(&a.q_b, "--q-b")?;
    nonempty(&a.q_e, "--q-e")?;
    let form = match a.form {
        SecrecyFormArg::Single => SecrecyForm::SingleIntegral,
        SecrecyFormArg::Double => SecrecyForm::DoubleIntegral,
    };
    let ge = from_db(a.snr_e_db);
    let mut t = Table::new(&[
        "gamma_bar_b_db",
        "q_b",
        "q_e",
        "p_outage",
        "p_positive",
        "rate_threshold",
    ]);
    let points: Vec<(f64, f64)> = if sweep.variable == SweepVar::RateThreshold {
        nonempty(&a.snr_b_db, "--snr-b-db")?;
        a.snr_b_db
            .iter()
            .flat_map(|&db| sweep.values().into_iter().map(move |r| (db, r)))
            .collect()
    } else {
        sweep
            .values()
            .into_iter()
            .map(|db| (db, a.rate_threshold))
            .collect()
    };
    for &qb in &a.q_b {
        for &qe in &a.q_e {
            for &(db, r) in &points {
                let sc = SecrecyScenario::new(channel(from_db(db), qb)?, channel(ge, qe)?, r)?;
                t.push(vec![
                    num(db),
                    num(qb),
                    num(qe),
                    num(secrecy_outage(&sc, quad, form)?),
                    num(prob_positive_secrecy(&sc, quad)?),
                    num(r),
                ]);
            }
        }
    }
    Ok(t)
}

/// Interferers used by `outage` when none are given.
pub fn default_outage_interferers() -> Vec<InterfererSpec> {
    [
        "kind=eta_mu,format=2,eta=0.04,mu=0.5",
        "kind=eta_mu,format=2,eta=0.04,mu=2",
        "kind=kappa_mu,kappa=2,mu=0.5",
        "kind=kappa_mu,kappa=2,mu=2",
    ]
    .iter()
    .map(|s| s.parse().expect("valid built-in interferer"))
    .collect()
}

struct Curve {
    label: String,
    interferers: Vec<Interferer>,
}

fn curves(a: &OutageArgs) -> Result<Vec<Curve>, CliError> {
    let specs = if a.interferer.is_empty() {
        default_outage_interferers()
    } else {
        a.interferer.clone()
    };
    let build = |s: &InterfererSpec| s.build(a.inr_db);
    if a.aggregate {
        let labels: Vec<_> = specs.iter().map(InterfererSpec::label).collect();
        Ok(vec![Curve {
            label: labels.join(" + "),
            interferers: specs.iter().map(build).collect::<Result<_, _>>()?,
        }])
    } else {
        specs
            .iter()
            .map(|s| {
                Ok(Curve {
                    label: s.label(),
                    interferers: vec![build(s)?],
                })
            })
            .collect()
    }
}

pub fn outage(a: &OutageArgs, quad: &QuadratureSpec) -> Result<Table, CliError> {
    let sweep = resolve_sweep(
        &a.sweep,
        &[
            (SweepVar::SinrDb, -10.0, 40.0, 51),
            (SweepVar::SirDb, -10.0, 40.0, 51),
            (SweepVar::SnrDb, -10.0, 40.0, 51),
        ],
    )?;
    nonempty(&a.q, "--q")?;
    let threshold = from_db(a.threshold_db);
    let mut t = Table::new(&["sinr_or_sir_db", "q", "interferer", "p_out"]);
    if sweep.variable == SweepVar::SnrDb {
        if !a.interferer.is_empty() {
            return usage("--sweep snr_db computes noise-only outage; drop --interferer");
        }
        for &q in &a.q {
            for db in sweep.values() {
                let sc = OutageScenario::noise_limited(channel(from_db(db), q)?, threshold)?;
                let p = outage_probability(&sc, quad, OutageForm::Transform)?;
                t.push(vec![num(db), num(q), "none".into(), num(p)]);
            }
        }
        return Ok(t);
    }
    let noise = sweep.variable == SweepVar::SinrDb;
    let curves = curves(a)?;
    for &q in &a.q {
        for c in &curves {
            let total: f64 = c.interferers.iter().map(Interferer::mean).sum();
            let set = InterferenceSet::from_interferers(&c.interferers);
            for db in sweep.values() {
                let ratio = from_db(db);
                let desired = if noise {
                    ratio * (1.0 + total)
                } else {
                    ratio * total
                };
                let sc =
                    OutageScenario::new(channel(desired, q)?, threshold, Some(set.clone()), noise)?;
                let p = outage_with_interference(&sc, quad)?;
                t.push(vec![num(db), num(q), c.label.clone(), num(p)]);
            }
        }
    }
    Ok(t)
}

pub fn ie_table(a: &IeTableArgs, quad: &QuadratureSpec) -> Result<Table, CliError> {
    nonempty(&a.k, "--k")?;
    nonempty(&a.x, "--x")?;
    let mut header = vec!["k".to_string(), "x".to_string()];
    header.extend(IeRepresentation::ALL.iter().map(|r| r.name().to_string()));
    let mut t = Table::new(&header);
    let kernel = QuadratureSpec {
        rel_tol: quad.rel_tol.min(kernel_quadrature().rel_tol),
        ..kernel_quadrature()
    };
    for &k in &a.k {
        for &x in &a.x {
            let mut row = vec![num(k), num(x)];
            for rep in IeRepresentation::ALL {
                row.push(num(rice_ie_with(k, x, rep, &kernel)?));
            }
            t.push(row);
        }
    }
    Ok(t)
}

/// Result of an `mc` run.
pub struct McOutcome {
    pub table: Table,
    pub agrees: bool,
    pub estimate: McEstimate,
    pub analytic: f64,
}

fn mc_interferers(a: &McArgs) -> Result<Vec<Interferer>, CliError> {
    let specs = if a.interferer.is_empty() {
        vec!["kind=eta_mu,format=2,eta=0.04,mu=0.5".parse()?]
    } else {
        a.interferer.clone()
    };
    specs.iter().map(|s| s.build(a.inr_db)).collect()
}

/// Analytic value and simulation model for the `mc` parameters.
pub fn mc_case(a: &McArgs, quad: &QuadratureSpec) -> Result<(McMetric, f64), CliError> {
    let kind: McKind = a.metric.parse()?;
    let desired = || channel(from_db(a.snr_db), a.q);
    let secrecy = || -> Result<SecrecyScenario, CliError> {
        Ok(SecrecyScenario::new(
            channel(from_db(a.snr_b_db), a.q_b)?,
            channel(from_db(a.snr_e_db), a.q_e)?,
            a.rate_threshold,
        )?)
    };
    let threshold = from_db(a.threshold_db);
    Ok(match kind {
        McKind::Outage => {
            let ch = desired()?;
            let sc = OutageScenario::noise_limited(ch, threshold)?;
            (
                McMetric::Outage {
                    channel: ch,
                    threshold,
                },
                outage_probability(&sc, quad, OutageForm::Transform)?,
            )
        }
        McKind::CapacityOra => {
            let ch = desired()?;
            (
                McMetric::CapacityOra { channel: ch },
                capacity_ora_hoyt(&ch, quad)?,
            )
        }
        McKind::SecrecyOutage => {
            let sc = secrecy()?;
            (
                McMetric::SecrecyOutage(sc),
                secrecy_outage(&sc, quad, SecrecyForm::SingleIntegral)?,
            )
        }
        McKind::ProbPositiveSecrecy => {
            let sc = secrecy()?;
            (
                McMetric::ProbPositiveSecrecy(sc),
                prob_positive_secrecy(&sc, quad)?,
            )
        }
        McKind::OpInterference => {
            let ch = desired()?;
            let is = mc_interferers(a)?;
            let sc = OutageScenario::new(
                ch,
                threshold,
                Some(InterferenceSet::from_interferers(&is)),
                !a.no_noise,
            )?;
            (
                McMetric::OpInterference {
                    desired: ch,
                    threshold,
                    interferers: is,
                    include_noise: !a.no_noise,
                },
                outage_with_interference(&sc, quad)?,
            )
        }
    })
}

pub fn mc(
    a: &McArgs,
    quad: &QuadratureSpec,
    samples: u64,
    seed: u64,
) -> Result<McOutcome, CliError> {
    let (metric, analytic) = mc_case(a, quad)?;
    let est = estimate_metric(&metric, samples, seed)?;
    let agrees = est.agrees_with(analytic, 3.0);
    let mut t = Table::new(&[
        "metric",
        "analytic",
        "mc_value",
        "std_error",
        "n_samples",
        "seed",
        "z_score",
        "within_3se",
    ]);
    t.push(vec![
        metric.kind().name().to_string(),
        num(analytic),
        num(est.value),
        num(est.std_error),
        est.n_samples.to_string(),
        est.seed.to_string(),
        num(est.z_score(analytic)),
        agrees.to_string(),
    ]);
    Ok(McOutcome {
        table: t,
        agrees,
        estimate: est,
        analytic,
    })
}
