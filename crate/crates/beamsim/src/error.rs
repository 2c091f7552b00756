use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(beamsim_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("output {} already exists (use --force to overwrite)", .0.display())]
    OutputExists(PathBuf),
}

impl AppError {
    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config(msg.into())
    }

    /// Process exit status: 2 for bad input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::OutputExists(_) => 2,
            AppError::Numerical(_) => 3,
            AppError::Io { .. } => 1,
        }
    }
}

impl From<beamsim_core::Error> for AppError {
    fn from(e: beamsim_core::Error) -> Self {
        use beamsim_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::InvalidPartition { .. } => AppError::Config(e.to_string()),
            other => AppError::Numerical(other),
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
