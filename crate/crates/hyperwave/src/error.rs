use hyperwave_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("cannot read {path}: {source}")]
    Input { path: String, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => EXIT_USAGE,
            CliError::Core(e) => match e {
                CoreError::InvalidArgument(_)
                | CoreError::Parse(_)
                | CoreError::Unsupported(_)
                | CoreError::SizeGuard { .. }
                | CoreError::MeasureValued { .. }
                | CoreError::OriginSingularity
                | CoreError::DalangDivergent => EXIT_USAGE,
                _ => EXIT_NUMERICAL,
            },
            CliError::Output(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_NUMERICAL,
        }
    }
}
