use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid cannot represent wavenumber {k}: need Nx >= {required_nx} on L1 = {l1}")]
    Resolution { k: f64, required_nx: usize, l1: f64 },
    #[error("wavenumber {k} is not periodic on L1 = {l1}")]
    NotPeriodic { k: f64, l1: f64 },
    #[error("partition property violated: {0}")]
    Partition(String),
}
