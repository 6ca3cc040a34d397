use thiserror::Error;

/// Errors raised by density construction, transforms and checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid spacing must be positive and finite, got {0}")]
    NonPositiveSpacing(f64),

    #[error("density value at cell {index} is negative or not finite: {value}")]
    NegativeValue { index: usize, value: f64 },

    #[error("grid has no cells")]
    EmptyGrid,

    #[error("density has zero total mass")]
    ZeroMass,

    #[error("density is not symmetric about the origin")]
    NotSymmetric,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("grids differ (x0, dx or cell count)")]
    GridMismatch,

    #[error("grid spacings differ: {0} vs {1}")]
    SpacingMismatch(f64, f64),

    #[error("mixture weights must be nonnegative and sum to 1 (sum = {0})")]
    WeightSum(f64),

    #[error("order {p} is outside the admissible range for dimension {n}")]
    OrderOutOfRange { p: f64, n: usize },

    #[error("beta = {beta} exceeds 2/(n+2) for dimension {n}")]
    BetaOutOfRange { beta: f64, n: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("density is not a normalized indicator of a set")]
    NotIndicator,

    #[error("numeric path supports only dimension 1, got {0}")]
    UnsupportedDimension(usize),

    #[error("Poisson series tail mass {tail:e} beyond k_max = {k_max} is not below {tol:e}")]
    TruncationInsufficient { k_max: usize, tail: f64, tol: f64 },

    #[error("invalid suite configuration: {0}")]
    ConfigInvalid(String),

    #[error("density file: {0}")]
    Format(String),

    #[error("quantity is not finite where a finite value is required: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
