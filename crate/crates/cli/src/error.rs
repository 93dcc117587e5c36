use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] comprat::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use comprat::Error as E;
        let code = match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Lib(e) => match e {
                E::Parse(_) => 4,
                E::SolveFailure(_) => 5,
                E::Domain(_)
                | E::Singularity { .. }
                | E::ExpansionCap { .. }
                | E::NonConvergence(_)
                | E::PrecisionInsufficient(_) => 3,
            },
        };
        ExitCode::from(code)
    }
}
