use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series does not converge: {0}")]
    NonConvergent(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),
    #[error("pole at {0}")]
    PoleAt(String),
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("table size beyond enumeration limits: {0}")]
    ScaleExceeded(String),
    #[error("contour abscissa outside validity strip: {0}")]
    StripViolation(String),
    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
