use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Per-prime values reported when independent primes disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeValues {
    pub prime: u64,
    pub values: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {prime} is below the working floor {floor}")]
    PrimeTooSmall { prime: u64, floor: u64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "genericity failure: {what} not achieved after {attempts} attempts (field too small?)"
    )]
    Genericity { what: String, attempts: usize },

    #[error("characteristic guard: prime {prime} must exceed degree {degree}")]
    CharacteristicGuard { prime: u64, degree: usize },

    #[error("field artifact: primes disagree ({})", format_per_prime(.0))]
    FieldArtifact(Vec<PrimeValues>),

    #[error("no stabilization by degree {degree} (reached {reached}); field artifact suspected")]
    NoStabilization { degree: usize, reached: usize },

    #[error("hilbert function invariant violated: {0}")]
    Invariant(String),

    #[error("configuration format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_per_prime(values: &[PrimeValues]) -> String {
    values
        .iter()
        .map(|pv| format!("p={}: {:?}", pv.prime, pv.values))
        .collect::<Vec<_>>()
        .join("; ")
}
