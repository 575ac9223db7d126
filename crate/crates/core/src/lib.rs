//! Performance metrics for wireless links under Hoyt (Nakagami-q) fading.
//!
//! A squared Hoyt SNR is an exponential SNR whose mean `γ(θ,q) = γ̄(1 − ε cosθ)`
//! is itself driven by `θ ~ U(0, π)`. Any metric obtained by averaging over
//! the SNR distribution therefore follows from its Rayleigh closed form by a
//! single finite-range integral over `θ` (the Hoyt transform, see
//! [`transform`]).
//!
//! Modules:
//! * [`special`]: I₀, E₁, Marcum Q₁, Rice Ie.
//! * [`fading`]: squared Hoyt, η-μ, κ-μ models and interference MGFs.
//! * [`transform`]: the Hoyt transform and its convexity brackets.
//! * [`metrics`]: capacity, secrecy and outage metrics.
//! * [`montecarlo`]: simulation oracle for every metric.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fading;
pub mod metrics;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
pub use fading::{
    EtaMuFormat, EtaMuModel, HoytChannel, InterferenceSet, Interferer, KappaMuModel, Mgf,
};
pub use montecarlo::McEstimate;
pub use quadrature::QuadratureSpec;
pub use transform::{MetricShape, RayleighMetric};

/// `10·log₁₀(x)`.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// `10^{x/10}`.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
