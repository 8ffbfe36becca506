use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point} is not strictly inside {domain}")]
    PointOutsideDomain { domain: String, point: String },

    #[error("operation `{op}` is not supported on {domain}")]
    UnsupportedKind { domain: String, op: &'static str },

    #[error("kernel diagonal K(z,z) = {value} is not positive at {point}")]
    NonpositiveDiagonal { point: String, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("profile `{profile}` has no usable asymptotic exponents: {detail}")]
    UndeclaredAsymptotics { profile: String, detail: String },

    #[error("invalid Reinhardt profile: {0}")]
    InvalidProfile(String),

    #[error("series does not appear to converge (shell ratio {ratio:.4} at degree {degree})")]
    SeriesDivergenceSuspected { degree: usize, ratio: f64 },

    #[error("invalid resolution: {0}")]
    InvalidResolution(String),

    #[error("non-finite value {value} at node {index}")]
    NonFiniteValue { index: usize, value: String },

    #[error("exponent {exponent} is within 1e-9 of -1; convergence is borderline")]
    BorderlineExponent { exponent: f64 },

    #[error("symbol is not finite at {point}")]
    NonFiniteSymbol { point: String },

    #[error("truncation {truncation} leaves a tail estimate of {tail:e}")]
    TruncationInsufficient { truncation: usize, tail: f64 },

    #[error("iteration did not converge after {iterations} steps (best lower bound {best})")]
    NoConvergence { iterations: usize, best: f64 },

    #[error("witness family is empty or has no admissible member")]
    EmptyFamily,

    #[error("index (n={n}, m={m}) is not admissible (need m >= 0 and n + m >= -1)")]
    InadmissibleIndex { n: i64, m: i64 },

    #[error("epsilon {0} is outside (0, 1)")]
    EpsilonOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed rule file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
