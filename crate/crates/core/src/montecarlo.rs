//! Monte Carlo ground truth built directly on the generative models: Gaussian
//! pairs for squared Hoyt, two-gamma sums for η-μ and Poisson-mixed gammas
//! for κ-μ.
//!
//! Samples are drawn in fixed-size chunks, each from its own ChaCha8 stream
//! (`seed`, stream = chunk index). Chunks run in parallel and are reduced in
//! index order, so an estimate depends only on `(seed, n, parameters)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::fading::{EtaMuModel, HoytChannel, Interferer, KappaMuModel};
use crate::metrics::SecrecyScenario;

/// Samples per substream.
pub const CHUNK: u64 = 1 << 16;

/// Smallest sample count accepted by [`estimate_metric`].
pub const MIN_SAMPLES: u64 = 1_000;

/// Monte Carlo point estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `value ± z·std_error`.
    pub fn confidence_interval(&self, z: f64) -> (f64, f64) {
        (
            self.value - z * self.std_error,
            self.value + z * self.std_error,
        )
    }

    /// `|value − reference| ≤ k·std_error`.
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        (self.value - reference).abs() <= k * self.std_error
    }

    /// Distance to `reference` in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.value - reference) / self.std_error
    }
}

/// A random power (SNR) generator.
#[derive(Debug, Clone)]
pub enum PowerSampler {
    SquaredHoyt {
        sigma_x: f64,
        sigma_y: f64,
    },
    EtaMu {
        first: Gamma<f64>,
        second: Gamma<f64>,
    },
    KappaMu {
        mu: f64,
        scale: f64,
        poisson: Option<Poisson<f64>>,
        plain: Gamma<f64>,
    },
}

impl PowerSampler {
    pub fn squared_hoyt(channel: &HoytChannel) -> Self {
        PowerSampler::SquaredHoyt {
            sigma_x: channel.sigma_x2().sqrt(),
            sigma_y: channel.sigma_y2().sqrt(),
        }
    }

    pub fn eta_mu(model: &EtaMuModel) -> Result<Self> {
        let (s1, s2) = model.gamma_scales();
        Ok(PowerSampler::EtaMu {
            first: gamma(model.mu(), s1)?,
            second: gamma(model.mu(), s2)?,
        })
    }

    pub fn kappa_mu(model: &KappaMuModel) -> Result<Self> {
        let mu = model.mu();
        let scale = model.gamma_bar() / (mu * (1.0 + model.kappa()));
        let rate = mu * model.kappa();
        let poisson = if rate > 0.0 {
            Some(Poisson::new(rate).map_err(|e| Error::Domain(e.to_string()))?)
        } else {
            None
        };
        Ok(PowerSampler::KappaMu {
            mu,
            scale,
            poisson,
            plain: gamma(mu, scale)?,
        })
    }

    pub fn interferer(i: &Interferer) -> Result<Self> {
        match i {
            Interferer::EtaMu(m) => Self::eta_mu(m),
            Interferer::KappaMu(m) => Self::kappa_mu(m),
            Interferer::Hoyt(c) => Ok(Self::squared_hoyt(c)),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            PowerSampler::SquaredHoyt { sigma_x, sigma_y } => {
                let x: f64 = rng.sample::<f64, _>(StandardNormal) * sigma_x;
                let y: f64 = rng.sample::<f64, _>(StandardNormal) * sigma_y;
                x * x + y * y
            }
            PowerSampler::EtaMu { first, second } => first.sample(rng) + second.sample(rng),
            PowerSampler::KappaMu {
                mu,
                scale,
                poisson,
                plain,
            } => match poisson {
                None => plain.sample(rng),
                Some(p) => {
                    let k = p.sample(rng);
                    if k == 0.0 {
                        plain.sample(rng)
                    } else {
                        Gamma::new(mu + k, *scale)
                            .expect("valid gamma parameters")
                            .sample(rng)
                    }
                }
            },
        }
    }
}

fn gamma(shape: f64, scale: f64) -> Result<Gamma<f64>> {
    Gamma::new(shape, scale).map_err(|e| Error::Domain(e.to_string()))
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunk_bounds(n: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let chunks = n.div_ceil(CHUNK) as usize;
    (0..chunks).into_par_iter().map(move |c| {
        let c = c as u64;
        let start = c * CHUNK;
        (c, (n - start).min(CHUNK))
    })
}

/// Draw `n` samples from `sampler`, chunk-wise reproducible.
pub fn sample_power(n: u64, sampler: &PowerSampler, seed: u64) -> Vec<f64> {
    let parts: Vec<Vec<f64>> = chunk_bounds(n)
        .map(|(c, len)| {
            let mut rng = chunk_rng(seed, c);
            (0..len).map(|_| sampler.draw(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

/// `R = X² + Y²` with `X ~ N(0, σ_x²)`, `Y ~ N(0, σ_y²)`.
pub fn sample_squared_hoyt(n: u64, channel: &HoytChannel, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return domain("sample count must be positive");
    }
    Ok(sample_power(n, &PowerSampler::squared_hoyt(channel), seed))
}

/// Sum of two independent gammas with shape μ.
pub fn sample_eta_mu(n: u64, model: &EtaMuModel, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return domain("sample count must be positive");
    }
    Ok(sample_power(n, &PowerSampler::eta_mu(model)?, seed))
}

/// Poisson(μκ)-mixed gamma with shape `μ + P` and scale `γ̄/(μ(1+κ))`.
pub fn sample_kappa_mu(n: u64, model: &KappaMuModel, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return domain("sample count must be positive");
    }
    Ok(sample_power(n, &PowerSampler::kappa_mu(model)?, seed))
}

/// Sample mean of `f` over `n` draws, with its standard error.
pub fn estimate_mean<F>(n: u64, seed: u64, f: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if n < 2 {
        return domain("at least two samples are needed for a standard error");
    }
    let partial: Vec<(f64, f64)> = chunk_bounds(n)
        .map(|(c, len)| {
            let mut rng = chunk_rng(seed, c);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..len {
                let v = f(&mut rng);
                sum += v;
                sum_sq += v * v;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partial
        .iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - sum * mean) / (nf - 1.0)).max(0.0);
    Ok(McEstimate {
        value: mean,
        std_error: (var / nf).sqrt(),
        n_samples: n,
        seed,
    })
}

/// Metric names accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McKind {
    Outage,
    CapacityOra,
    SecrecyOutage,
    ProbPositiveSecrecy,
    OpInterference,
}

impl McKind {
    pub const ALL: [McKind; 5] = [
        McKind::Outage,
        McKind::CapacityOra,
        McKind::SecrecyOutage,
        McKind::ProbPositiveSecrecy,
        McKind::OpInterference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            McKind::Outage => "outage",
            McKind::CapacityOra => "capacity_ora",
            McKind::SecrecyOutage => "secrecy_outage",
            McKind::ProbPositiveSecrecy => "prob_positive_secrecy",
            McKind::OpInterference => "op_interference",
        }
    }
}

impl fmt::Display for McKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for McKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        McKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = McKind::ALL.iter().map(|k| k.name()).collect();
                Error::Usage(format!(
                    "unknown metric '{s}'; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// A metric together with the parameters needed to simulate it.
#[derive(Debug, Clone)]
pub enum McMetric {
    Outage {
        channel: HoytChannel,
        threshold: f64,
    },
    CapacityOra {
        channel: HoytChannel,
    },
    SecrecyOutage(SecrecyScenario),
    ProbPositiveSecrecy(SecrecyScenario),
    OpInterference {
        desired: HoytChannel,
        threshold: f64,
        interferers: Vec<Interferer>,
        include_noise: bool,
    },
}

impl McMetric {
    pub fn kind(&self) -> McKind {
        match self {
            McMetric::Outage { .. } => McKind::Outage,
            McMetric::CapacityOra { .. } => McKind::CapacityOra,
            McMetric::SecrecyOutage(_) => McKind::SecrecyOutage,
            McMetric::ProbPositiveSecrecy(_) => McKind::ProbPositiveSecrecy,
            McMetric::OpInterference { .. } => McKind::OpInterference,
        }
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Empirical estimate of `metric` from `n` samples.
///
/// Outage and secrecy metrics are indicator means; capacity is the mean of
/// `log₂(1+γ)`. The secrecy outage event is
/// `log₂(1+γ_b) − log₂(1+γ_e) < R_S`, which at `R_S = 0` is `γ_b < γ_e`.
pub fn estimate_metric(metric: &McMetric, n: u64, seed: u64) -> Result<McEstimate> {
    if n < MIN_SAMPLES {
        return domain(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {n}"
        ));
    }
    match metric {
        McMetric::Outage { channel, threshold } => {
            let s = PowerSampler::squared_hoyt(channel);
            let t = *threshold;
            estimate_mean(n, seed, |rng| indicator(s.draw(rng) < t))
        }
        McMetric::CapacityOra { channel } => {
            let s = PowerSampler::squared_hoyt(channel);
            estimate_mean(n, seed, |rng| {
                s.draw(rng).ln_1p() * std::f64::consts::LOG2_E
            })
        }
        McMetric::SecrecyOutage(sc) => {
            let (b, e) = (
                PowerSampler::squared_hoyt(&sc.bob),
                PowerSampler::squared_hoyt(&sc.eve),
            );
            let factor = sc.rate_threshold().exp2();
            estimate_mean(n, seed, |rng| {
                let gb = b.draw(rng);
                let ge = e.draw(rng);
                indicator(1.0 + gb < factor * (1.0 + ge))
            })
        }
        McMetric::ProbPositiveSecrecy(sc) => {
            let (b, e) = (
                PowerSampler::squared_hoyt(&sc.bob),
                PowerSampler::squared_hoyt(&sc.eve),
            );
            estimate_mean(n, seed, |rng| {
                let gb = b.draw(rng);
                let ge = e.draw(rng);
                indicator(gb > ge)
            })
        }
        McMetric::OpInterference {
            desired,
            threshold,
            interferers,
            include_noise,
        } => {
            let d = PowerSampler::squared_hoyt(desired);
            let is = interferers
                .iter()
                .map(PowerSampler::interferer)
                .collect::<Result<Vec<_>>>()?;
            let noise = if *include_noise { 1.0 } else { 0.0 };
            let t = *threshold;
            estimate_mean(n, seed, |rng| {
                let x = d.draw(rng);
                let y: f64 = is.iter().map(|s| s.draw(rng)).sum();
                indicator(x < t * (y + noise))
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::EtaMuFormat;

    #[test]
    fn variance_mapping() {
        let c = HoytChannel::new(2.0, 1.0).unwrap();
        match PowerSampler::squared_hoyt(&c) {
            PowerSampler::SquaredHoyt { sigma_x, sigma_y } => {
                assert_eq!(sigma_x, 1.0);
                assert_eq!(sigma_y, 1.0);
            }
            _ => unreachable!(),
        }
        let z = HoytChannel::new(2.0, 0.0).unwrap();
        match PowerSampler::squared_hoyt(&z) {
            PowerSampler::SquaredHoyt { sigma_y, .. } => assert_eq!(sigma_y, 0.0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn reproducible_and_chunk_aligned() {
        let c = HoytChannel::new(1.0, 0.4).unwrap();
        let a = sample_squared_hoyt(CHUNK + 17, &c, 9).unwrap();
        let b = sample_squared_hoyt(CHUNK + 17, &c, 9).unwrap();
        assert_eq!(a, b);
        let short = sample_squared_hoyt(10, &c, 9).unwrap();
        assert_eq!(&a[..10], &short[..]);
        let other = sample_squared_hoyt(10, &c, 10).unwrap();
        assert_ne!(short, other);
        assert!(sample_squared_hoyt(0, &c, 1).is_err());
    }

    #[test]
    fn estimates_are_deterministic() {
        let m = McMetric::Outage {
            channel: HoytChannel::new(3.0, 0.5).unwrap(),
            threshold: 1.0,
        };
        let a = estimate_metric(&m, 200_000, 42).unwrap();
        let b = estimate_metric(&m, 200_000, 42).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert!(estimate_metric(&m, 999, 1).is_err());
    }

    #[test]
    fn kind_parsing() {
        for k in McKind::ALL {
            assert_eq!(k.name().parse::<McKind>().unwrap(), k);
        }
        assert!(matches!("ber".parse::<McKind>(), Err(Error::Usage(_))));
    }

    #[test]
    fn kappa_zero_is_plain_gamma() {
        let m = KappaMuModel::new(0.0, 2.0, 1.0).unwrap();
        match PowerSampler::kappa_mu(&m).unwrap() {
            PowerSampler::KappaMu { poisson, .. } => assert!(poisson.is_none()),
            _ => unreachable!(),
        }
        let e = EtaMuModel::new(EtaMuFormat::Two, 0.2, 0.75, 2.0).unwrap();
        let s = sample_eta_mu(1000, &e, 3).unwrap();
        assert!(s.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn interval_helpers() {
        let e = McEstimate {
            value: 1.0,
            std_error: 0.1,
            n_samples: 100,
            seed: 0,
        };
        let (lo, hi) = e.confidence_interval(3.0);
        assert!((lo - 0.7).abs() < 1e-15 && (hi - 1.3).abs() < 1e-15);
        assert!(e.agrees_with(1.25, 3.0));
        assert!(!e.agrees_with(1.35, 3.0));
    }
}
