use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid discriminant: {0}")]
    InvalidDiscriminant(String),
    #[error("{0} is not a quadratic residue modulo {1}")]
    NonResidue(String, u64),
    #[error("prime {0} is inert")]
    Inert(u64),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("ideal is not smooth over the factor base (cofactor {cofactor})")]
    NotSmooth { cofactor: String },
    #[error("matrix does not have full column rank ({rank} < {cols})")]
    RankDeficient { rank: usize, cols: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("not enough relations: {0}")]
    RelationDeficit(String),
    #[error("time budget exhausted")]
    Timeout,
    #[error("result failed verification: {0}")]
    Unverified(String),
    #[error("target ideal is likely not principal")]
    LikelyNonPrincipal,
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
