use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-conditioned peripheral decomposition (condition number {condition:e}): {detail}")]
    IllConditioned { condition: f64, detail: String },

    #[error("decomposition failure: {0}")]
    Decomposition(String),

    #[error("splitting violation: direct-sum residual {residual:e} below tolerance")]
    Splitting { residual: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
