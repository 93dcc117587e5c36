use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular denominator in stage {stage} of the composition")]
    Singularity { stage: usize },
    #[error("expansion degree {degree} exceeds the configured cap {cap}")]
    ExpansionCap { degree: u64, cap: u64 },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("precision insufficient: {0}; raise the significand bits")]
    PrecisionInsufficient(String),
    #[error("linear solve failed: {0}")]
    SolveFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}
