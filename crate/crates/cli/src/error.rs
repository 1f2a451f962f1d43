use std::fmt;

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid configuration or plan (exit 2).
    Config(String),
    /// An invariant group failed (exit 1).
    Invariant(String),
    /// The run blew up (exit 3).
    BlowUp(String),
    /// Anything else at run time (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Invariant(_) | CliError::Runtime(_) => 1,
            CliError::BlowUp(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant failure: {m}"),
            CliError::BlowUp(m) => write!(f, "blow-up: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<qgpe::Error> for CliError {
    fn from(e: qgpe::Error) -> Self {
        match e {
            qgpe::Error::BlowUp { .. } | qgpe::Error::Cfl { .. } => CliError::BlowUp(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
