use thiserror::Error;

/// Exit codes, one per failure class.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const CONFIG: i32 = 3;
    pub const PRECISION: i32 = 4;
    pub const SINGULAR: i32 = 5;
    pub const SHRINK: i32 = 6;
    pub const BUDGET: i32 = 7;
    pub const IO: i32 = 8;
    pub const PARSE: i32 = 9;
    pub const INCONSISTENT: i32 = 10;
    pub const DUPLICATE: i32 = 11;
    pub const OTHER: i32 = 12;
}

pub const EXIT_CODE_HELP: &str = "\
Exit codes:
   0  success
   2  usage error (bad flags or arguments)
   3  invalid configuration (non-prime base, dimension mismatch, unmet precondition)
   4  precision exhausted (division by a vanishing series, no convergence)
   5  singular matrix at working precision
   6  shrinking factor below the minimal admissible degrees
   7  enumeration budget exceeded
   8  I/O failure
   9  parse failure (series text, point file, JSON)
  10  verification inconsistency (duality check, claimed t, group structure)
  11  points not separated at the truncation depth
  12  other failure";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("[{stage}] {source}")]
    Core {
        stage: &'static str,
        #[source]
        source: polyfrolov::Error,
    },

    #[error("[config] {0}")]
    Config(String),

    #[error("[{stage}] verification failed: {message}")]
    Inconsistent { stage: &'static str, message: String },

    #[error("[io] {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn stage(&self) -> &'static str {
        match self {
            CliError::Core { stage, .. } | CliError::Inconsistent { stage, .. } => stage,
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
        }
    }

    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core { source, .. } => source.code(),
            CliError::Config(_) => "invalid_config",
            CliError::Inconsistent { .. } => "verification_inconsistent",
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        use polyfrolov::Error as E;
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Inconsistent { .. } => exit::INCONSISTENT,
            CliError::Io { .. } => exit::IO,
            CliError::Core { source, .. } => match source {
                E::NotPrime(_)
                | E::ModulusMismatch { .. }
                | E::DimensionMismatch(_)
                | E::PreconditionViolated(_)
                | E::DimensionTooLarge { .. } => exit::CONFIG,
                E::PrecisionExhausted(_)
                | E::DivideByZero { .. }
                | E::Unbounded
                | E::NonConvergent { .. } => exit::PRECISION,
                E::Singular { .. } => exit::SINGULAR,
                E::ShrinkConditionViolated { .. } => exit::SHRINK,
                E::BudgetExceeded { .. } => exit::BUDGET,
                E::Io(_) => exit::IO,
                E::Parse(_) | E::Json(_) => exit::PARSE,
                E::NotAGroup => exit::INCONSISTENT,
                E::DuplicateAtDepth { .. } => exit::DUPLICATE,
                #[allow(unreachable_patterns)]
                _ => exit::OTHER,
            },
        }
    }
}

/// Tags a core error with the stage it came from.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError>;
}

impl<T> StageExt<T> for polyfrolov::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { stage, source })
    }
}

pub fn io_err(path: impl AsRef<std::path::Path>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.as_ref().display().to_string();
    move |source| CliError::Io { path, source }
}
