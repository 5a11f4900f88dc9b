use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is too small; need a prime m >= 3")]
    ModulusTooSmall(u64),
    #[error("modulus {0} does not fit in 32 bits")]
    ModulusTooLarge(u64),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero in field")]
    DivisionByZero,
    #[error("operands use different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("full column rank, no normal directions")]
    FullColumnRank,
    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generic configuration not found after {} attempt(s): {}", .0.len(), .0.join("; "))]
    GenericConfigurationNotFound(Vec<String>),
    #[error("certificate line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
