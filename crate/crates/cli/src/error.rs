use std::fmt;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Regime(String),
    Invariant(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Regime(_) => 3,
            CliError::Invariant(_) | CliError::Io(_) | CliError::Numerical(_) => 1,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Regime(m) => write!(f, "regime error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<nehari_core::Error> for CliError {
    fn from(e: nehari_core::Error) -> Self {
        use nehari_core::Error as E;
        match e {
            E::Regime(m) => CliError::Regime(m),
            E::UnsupportedDimension(..) | E::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
