use thiserror::Error;

use crate::report::ExperimentReport;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Numerical(#[from] bergman_core::Error),

    #[error("{source} (partial report retained for N < {failed_at})")]
    Partial {
        report: Box<ExperimentReport>,
        failed_at: u32,
        source: bergman_core::Error,
    },

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl LabError {
    /// Process exit status: 1 check or configuration failure, 2 numerical
    /// failure, 3 input/output.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::ChecksFailed(_) => 1,
            LabError::Numerical(_) | LabError::Partial { .. } | LabError::ThreadPool(_) => 2,
            LabError::Io(_) | LabError::Json(_) | LabError::Csv(_) => 3,
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
