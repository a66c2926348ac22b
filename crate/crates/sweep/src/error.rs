use chlab_constructions::ConstructionError;
use chlab_core::CoreError;
use chlab_dissipation::DissipationError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resolution exceeds caps: {0}")]
    Infeasible(String),
    #[error("fit needs at least 4 usable records, got {0}")]
    TooFewRecords(usize),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Dissipation(#[from] DissipationError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl SweepError {
    /// Process exit status for the command line: 2 for configuration errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Config(_) => 2,
            _ => 1,
        }
    }
}
