use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// The variants are grouped so a front end can map them onto stable exit
/// codes: budget violations, the coprimality precondition and theorem
/// violations each have their own bucket.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field size {q} exceeds the configured maximum {max}")]
    FieldTooLarge { q: u64, max: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{what} budget exceeded: need {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u64,
    },

    #[error("dimension vector {dims} is not coprime for theta {theta}")]
    NotCoprime { dims: String, theta: String },

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
