use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported Cartan type `{0}`")]
    UnsupportedType(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not a root")]
    NotARoot(String),
    #[error("root subsystem is not closed: {0} is missing")]
    NotClosed(String),
    #[error("weight {0} lies outside the computed window")]
    OutsideWindow(String),
    #[error("window too shallow: {0}")]
    WindowTooShallow(String),
    #[error("not a singular vector: {0}")]
    NotSingular(String),
    #[error("Clifford relation fails: {0}")]
    CliffordFailure(String),
    #[error("square identity fails at weight {0}")]
    SquareMismatch(String),
    #[error("maps are not module maps: {0}")]
    NotEquivariant(String),
    #[error("lift failure: {0}")]
    LiftFailure(String),
    #[error("pair is not Hermitian symmetric: {0}")]
    NotHermitian(String),
    #[error("contravariant form is not positive definite at weight {0}")]
    NotUnitary(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
