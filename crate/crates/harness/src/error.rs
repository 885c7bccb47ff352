use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("extraction window empty: {0}")]
    EmptyWindow(String),
    #[error("{0}")]
    Pole(String),
    #[error("identity suite failed: {0}")]
    SuiteFailure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Io(_) => 1,
            HarnessError::Config(_) => 2,
            HarnessError::Solver(_) => 3,
            HarnessError::EmptyWindow(_) => 4,
            HarnessError::Pole(_) => 5,
            HarnessError::SuiteFailure(_) => 6,
        }
    }
}
