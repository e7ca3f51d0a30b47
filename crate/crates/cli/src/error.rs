use thiserror::Error;

use robust_transfer::Error as CoreError;

use crate::output::Table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{failures} self-check row(s) failed")]
    SelfCheck { failures: usize, table: Table },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Capacity { .. } => 3,
                CoreError::NotUnitary(_) | CoreError::Numerical(_) => 4,
                _ => 2,
            },
            CliError::Numerical(_) | CliError::SelfCheck { .. } => 4,
            CliError::Io(_) => 1,
        }
    }
}
