use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular point at z = {re}{im:+}i")]
    Singularity { re: f64, im: f64 },

    #[error("homogeneous map is undefined at the origin")]
    UndefinedAtOrigin,

    #[error("radius {radius} is a critical radius (branch point on the circle)")]
    CriticalRadius { radius: f64 },

    #[error("non-finite integrand sample at {at}")]
    NonFinite { at: f64 },

    #[error("quadrature budget exhausted: {0}")]
    QuadratureBudget(String),

    #[error("frequency undefined: H(r) = {h} is not above tolerance")]
    FrequencyUndefined { h: f64 },

    #[error("log-domain error: value {value} is not positive")]
    LogDomain { value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("constant {0} must be supplied for m > 2")]
    UnconfiguredConstant(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("parse error: {0}")]
    Parse(String),
}
