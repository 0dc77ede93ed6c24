use thiserror::Error;

#[derive(Debug, Error)]
pub enum TilingError {
    #[error("singular lattice basis (determinant is zero)")]
    SingularLattice,
    #[error("operation requires an offset-free lattice")]
    NonZeroOffset,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration cap exceeded: needed more than {cap} points")]
    CapacityExceeded { cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, TilingError>;
