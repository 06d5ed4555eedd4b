use serde_json::Value;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments, config files or inputs.
    #[error("{0}")]
    Config(String),
    /// A numerical method did not converge; the payload is printed to stdout.
    #[error("{message}")]
    NonConvergence { message: String, diagnostics: Value },
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::NonConvergence { .. } => EXIT_NONCONVERGENCE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<expprod::Error> for CliError {
    fn from(e: expprod::Error) -> Self {
        use expprod::Error as E;
        match e {
            E::InvalidArgument(_)
            | E::Domain(_)
            | E::Parse(_)
            | E::Json(_)
            | E::FrozenTrotter
            | E::Resource(_)
            | E::NotLieElement { .. } => CliError::Config(e.to_string()),
            E::Branch(_) => CliError::NonConvergence {
                message: e.to_string(),
                diagnostics: serde_json::json!({ "error": e.to_string() }),
            },
            E::Io(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
