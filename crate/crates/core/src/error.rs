use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree cutoff exceeded: degree {degree} > cutoff {cutoff}")]
    CutoffExceeded { degree: u32, cutoff: u32 },

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid Lie data: {0}")]
    InvalidLieData(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("wrong Hopf algebra: {0}")]
    WrongHopfAlgebra(String),

    #[error("not a subalgebra: {0}")]
    NotASubalgebra(String),

    #[error("Jordan precondition failed: {0}")]
    JordanPreconditionFailed(String),

    #[error("S0 is not free at degree bound {bound}: {detail}")]
    S0NotFree { bound: u32, detail: String },

    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: dimension mismatch: {message}")]
    DimensionMismatch { line: usize, message: String },

    #[error("product table is not total: missing row `{0} {1}`")]
    TableNotTotal(String, String),

    #[error("Jacobi identity fails for generators ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),

    #[error("internal error: {0}")]
    Internal(String),
}
