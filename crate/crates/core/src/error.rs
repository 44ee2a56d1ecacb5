use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("singular diagonal block at index {index}")]
    SingularBlock { index: usize },

    #[error("assignment not solvable: rank {rank} < required {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("linear system inconsistent, residual {residual:e}")]
    Unsolvable { residual: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("solvent set invalid: {0}")]
    Solvents(String),
}
