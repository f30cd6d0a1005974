use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("extension arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("elements carry different extension constants")]
    ExtensionMismatch,
    #[error("grid specs differ")]
    SpecMismatch,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("m must be positive")]
    NonPositiveMass,
    #[error("rotation angle {0} is not a multiple of pi/2")]
    Rotation(f64),
    #[error("invariant {0} vanishes; the orbit is degenerate")]
    DegenerateOrbit(&'static str),
    #[error("commutator {0} could not be expressed in the basis")]
    BasisReexpression(String),
    #[error("factorization residual {0:e} exceeds tolerance")]
    Factorization(f64),
    #[error("noncommutativity parameter must be nonzero")]
    ZeroTheta,
    #[error("singular linear system")]
    Singular,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
