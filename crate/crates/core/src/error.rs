use thiserror::Error;

/// Errors produced by the numerical kernels and metric evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("MGF evaluated at s = {s}, outside its validity region s < {bound}")]
    MgfDomain { s: f64, bound: f64 },

    #[error("quadrature did not converge with {nodes} nodes: estimate {estimate}, error bound {error_bound}")]
    Convergence {
        estimate: f64,
        error_bound: f64,
        nodes: usize,
    },

    #[error("bounds require a decreasing-convex or increasing-concave metric")]
    UnsupportedShape,

    #[error("metric evaluation returned a non-finite value at mean SNR {0}")]
    NonFinite(f64),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
