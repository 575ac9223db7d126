//! The Hoyt transform: lift a Rayleigh-averaged metric `h̄_R(γ̄)` to Hoyt
//! fading by averaging it over the conditioned means `γ(θ,q)`,
//!
//! ```text
//! h̄_H(γ̄) = (1/π) ∫₀^π h̄_R(γ(θ,q)) dθ,   γ(θ,q) = γ̄(1 − ε cosθ).
//! ```
//!
//! The lifted value is only meaningful when the instantaneous metric `h(γ)`
//! behind `h̄_R` is nonnegative and continuous; callers are responsible for
//! that.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fading::HoytChannel;
use crate::quadrature::QuadratureSpec;

/// Shape of a Rayleigh metric as a function of mean SNR. Selects which side
/// of [`bounds`] each bracket lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricShape {
    DecreasingConvex,
    IncreasingConcave,
    #[default]
    Unknown,
}

type Evaluator = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A metric in Rayleigh fading as a function of the mean SNR.
///
/// The evaluator must accept every mean in `(0, γ̄(1+ε)]`; when `q < 1` it
/// also has to handle arguments arbitrarily close to `γ̄(1−ε)`, which is `0⁺`
/// for `q = 0`.
#[derive(Clone)]
pub struct RayleighMetric {
    evaluator: Arc<Evaluator>,
    shape: MetricShape,
}

impl fmt::Debug for RayleighMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RayleighMetric")
            .field("shape", &self.shape)
            .finish_non_exhaustive()
    }
}

impl RayleighMetric {
    /// Metric from a fallible evaluator.
    pub fn new<F>(shape: MetricShape, f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            evaluator: Arc::new(f),
            shape,
        }
    }

    /// Metric from an infallible evaluator.
    pub fn from_fn<F>(shape: MetricShape, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(shape, move |g| Ok(f(g)))
    }

    pub fn shape(&self) -> MetricShape {
        self.shape
    }

    pub fn evaluate(&self, mean_snr: f64) -> Result<f64> {
        let v = (self.evaluator)(mean_snr)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(mean_snr))
        }
    }

    /// `a·self + b·other`; the shape is kept only when it is preserved.
    pub fn combine(&self, a: f64, other: &RayleighMetric, b: f64) -> RayleighMetric {
        let shape = if self.shape == other.shape && a >= 0.0 && b >= 0.0 {
            self.shape
        } else {
            MetricShape::Unknown
        };
        let (l, r) = (self.clone(), other.clone());
        RayleighMetric::new(shape, move |g| Ok(a * l.evaluate(g)? + b * r.evaluate(g)?))
    }
}

/// Apply the Hoyt transform to `metric`.
///
/// `q = 1` returns `metric(γ̄)` without quadrature.
pub fn transform(
    metric: &RayleighMetric,
    channel: &HoytChannel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if channel.is_rayleigh() {
        return metric.evaluate(channel.gamma_bar());
    }
    quad.average_over_half_turn(|theta| {
        let g = channel.mean_at(theta);
        metric.evaluate(g)
    })
}

/// Lower and upper brackets of the transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }
}

/// Brackets from Jensen's inequality and monotonicity: the Rayleigh metric at
/// `γ̄` and at the scaled mean `2q²γ̄/(1+q²)`.
pub fn bounds(metric: &RayleighMetric, channel: &HoytChannel) -> Result<Bounds> {
    let at_mean = || metric.evaluate(channel.gamma_bar());
    let at_scaled = || {
        let g = channel.min_conditioned_mean();
        if g > 0.0 {
            metric.evaluate(g)
        } else {
            metric.evaluate(f64::MIN_POSITIVE)
        }
    };
    match metric.shape() {
        MetricShape::DecreasingConvex => Ok(Bounds {
            lower: at_mean()?,
            upper: at_scaled()?,
        }),
        MetricShape::IncreasingConcave => Ok(Bounds {
            lower: at_scaled()?,
            upper: at_mean()?,
        }),
        MetricShape::Unknown => Err(Error::UnsupportedShape),
    }
}
