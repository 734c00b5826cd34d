use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n must be at least 1")]
    NTooSmall,
    #[error("n must be <= {max} (got {n})")]
    NTooLarge { n: i64, max: u32 },
    #[error("m must be >= 0 (got {0})")]
    MNegative(i64),
    #[error("m must be < n (got m={m}, n={n})")]
    MNotBelowN { m: i64, n: i64 },
    #[error("q must be >= 0")]
    QNegative,
    #[error("q exceeds 2^n (q={q}, n={n})")]
    QExceedsDomain { q: String, n: u32 },
    #[error("q={q} is outside the exact enumeration envelope (q <= {max})")]
    EnumerationEnvelope { q: String, max: u64 },
    #[error("q={q} is outside the simulation envelope (q <= {max})")]
    SimulationEnvelope { q: String, max: u64 },
    #[error("trials must be >= {min} (got {trials})")]
    TooFewTrials { trials: u64, min: u64 },
    #[error("{0}")]
    Precondition(String),
}
