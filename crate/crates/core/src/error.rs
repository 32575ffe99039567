use thiserror::Error;

#[derive(Debug, Error)]
pub enum SplabError {
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("iteration limit reached: {0}")]
    IterationLimit(String),

    #[error("mass constraint violated: {0}")]
    Constraint(String),

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("oracle too large: {0} interior nodes (limit {1})")]
    OracleTooLarge(usize, usize),

    #[error("shooting error: {0}")]
    Shooting(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("refinement error: {0}")]
    Refinement(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SplabError>;
