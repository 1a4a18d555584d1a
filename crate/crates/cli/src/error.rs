use thiserror::Error;

/// Failures surfaced by the command-line front end, each with a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("{0}")]
    Parse(String),
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("{0}")]
    Failure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadModulus(_) => 2,
            CliError::Parse(_) => 3,
            CliError::CheckpointMismatch(_) => 4,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<simroots::Error> for CliError {
    fn from(e: simroots::Error) -> Self {
        use simroots::Error as E;
        match e {
            E::NotPrime(_) | E::ZeroModulus | E::ModulusTooLarge(_) => {
                CliError::BadModulus(e.to_string())
            }
            E::Parse { .. } | E::CoefficientOverflow => CliError::Parse(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(format!("json: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(format!("csv: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
