use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants are grouped by how the command-line front end reports them:
/// parse errors, precondition violations and failed internal checks each
/// map to their own exit code (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("lattice is not even: {0}")]
    NotEven(String),

    #[error("lattice is degenerate (det = 0)")]
    Degenerate,

    #[error("lattice is not negative definite")]
    NotNegativeDefinite,

    #[error("lattice is definite; an indefinite lattice is required")]
    Definite,

    #[error("rescaled Gram matrix is not integral")]
    NonIntegral,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("map is not an isometry: {0}")]
    NotIsometry(String),

    #[error("finite quadratic form is ill-formed: {0}")]
    IllFormed(String),

    #[error("group of order {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: u64, cap: u64 },

    #[error("subgroup is not isotropic")]
    NotIsotropic,

    #[error("glue map invalid: {0}")]
    InvalidGlue(String),

    #[error("form is not 2-elementary of even type: {0}")]
    NotTwoElementaryEven(String),

    #[error("no eighth root of unity within tolerance (|sum| = {0})")]
    GaussSum(String),

    #[error("internal check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Process exit code used by the CLI: 1 parse, 2 precondition, 3 check failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 1,
            Error::CheckFailed(_) | Error::GaussSum(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
