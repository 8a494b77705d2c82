use thiserror::Error;

/// Errors raised by the arithmetic, construction and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 256")]
    NotPrime(u32),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("division by a series that is zero up to precision {prec}")]
    DivideByZero { prec: i64 },

    #[error("exact series has an infinite inverse; a precision cap is required")]
    Unbounded,

    #[error("Frobenius sum does not converge: degree bound {deg} is not negative")]
    NonConvergent { deg: i64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular up to precision (row {row}); higher precision may resolve it")]
    Singular { row: usize },

    #[error("enumeration budget exceeded: {size} elements > cap {cap}")]
    BudgetExceeded { size: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("shrinking factor violates the degree condition: have {have:?}, need at least {need:?}")]
    ShrinkConditionViolated { have: Vec<i64>, need: Vec<i64> },

    #[error("points are not separated at depth {depth}")]
    DuplicateAtDepth { depth: usize },

    #[error("point set is not a group under digit-wise addition")]
    NotAGroup,

    #[error("dimension {d} too large for exact computation (max {max})")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::ModulusMismatch { .. } => "modulus_mismatch",
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::DivideByZero { .. } => "divide_by_zero",
            Error::Unbounded => "unbounded",
            Error::NonConvergent { .. } => "non_convergent",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Singular { .. } => "singular",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::ShrinkConditionViolated { .. } => "shrink_condition_violated",
            Error::DuplicateAtDepth { .. } => "duplicate_at_depth",
            Error::NotAGroup => "not_a_group",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
