use thiserror::Error;

/// Errors raised by the arithmetic, polynomial and counting routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("modulus {0} exceeds the supported ceiling 2^62")]
    ModulusTooLarge(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue is zero modulo {0}; its order is undefined")]
    ZeroResidue(u64),
    #[error("value {value} outside the range [{lo}, {hi}]")]
    OutOfRange { value: u64, lo: u64, hi: u64 },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("coefficient overflow during exact polynomial arithmetic")]
    CoefficientOverflow,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("at least one polynomial is required")]
    NoPolynomials,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
