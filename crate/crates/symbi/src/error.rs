use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: 2 - omega*s1 vanishes")]
    Pole,
    #[error("point is not in G")]
    NotInG,
    #[error("degenerate datum")]
    Degenerate,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point is off the set: {0}")]
    OffSet(String),
    #[error("boundary contact: 1 - phi vanishes")]
    BoundaryContact,
    #[error("solver did not converge (best residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("inconsistent: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
