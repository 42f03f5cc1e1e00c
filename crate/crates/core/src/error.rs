use thiserror::Error;

/// Errors produced by the shape, mesh, eigen and flow layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("metric {metric} does not apply to {shapes}")]
    MetricMismatch { metric: String, shapes: String },

    #[error("origin is not interior to the convex body (min support {0:.3e})")]
    OriginNotInterior(f64),

    #[error("shape leaves the container ball of radius {0}")]
    OutsideContainer(f64),

    #[error("target mesh size {0} is too coarse: fewer than 3 rings")]
    TargetTooCoarse(f64),

    #[error("degenerate triangle {index} (signed area {area:.3e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("eigen iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    IterationDivergence { iterations: usize, residual: f64 },

    #[error("no sign change of the shooting residual in [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("zero vector has no Rayleigh quotient")]
    ZeroVector,

    #[error("perturbed domain is not admissible at offset {0}")]
    AdmissibilityLost(f64),

    #[error("sigma must be nonzero")]
    InvalidSigma,

    #[error("negative Robin parameter {0} is rejected by the flow engine: the implicit Euler scheme is not well-defined for beta < 0")]
    NegativeBeta(f64),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
