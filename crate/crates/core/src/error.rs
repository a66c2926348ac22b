use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("non-finite value in field")]
    NonFinite,
    #[error("singular matrix at pivot {0}")]
    Singular(usize),
    #[error("solver did not converge: relative residual {residual:.3e} after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error("field file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
