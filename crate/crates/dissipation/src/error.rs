use chlab_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DissipationError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("test field is not admissible: {0}")]
    Inadmissible(String),
    #[error("linear solve stalled after {iterations} iterations at relative residual {residual:.3e}")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
}

pub(crate) fn check_nu(nu: f64) -> Result<(), DissipationError> {
    if nu.is_finite() && nu > 0.0 {
        Ok(())
    } else {
        Err(DissipationError::InvalidInput(format!("viscosity must be positive, got {nu}")))
    }
}
