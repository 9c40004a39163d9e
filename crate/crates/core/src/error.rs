use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{d} is divisible by p = {p}")]
    DivisibleByP { d: i64, p: u64 },
    #[error("{d} is not a root of the cyclotomic polynomial of order {order} mod p")]
    NotARoot { d: u64, order: u64 },
    #[error("precision exhausted: numerator image vanishes mod p^{0}")]
    PrecisionExhausted(u32),
    #[error("precision cap p^{0} exceeded for a nonzero element; raise the cap")]
    PrecisionCapExceeded(u32),
    #[error("field mismatch: Q(mu_{}) vs Q(mu_{})", .left - 1, .right - 1)]
    FieldMismatch { left: u64, right: u64 },
    #[error("characters attached to different branches (d = {left} vs d = {right})")]
    BranchMismatch { left: u64, right: u64 },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("pole: {0}")]
    Pole(String),
    #[error("parity violation: chi(-1) != (-1)^{k}")]
    Parity { k: u64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("alpha1 - alpha2 = {diff} is not divisible by (p-1)/2 = {half}: not a quadratic twist")]
    NotQuadraticTwist { diff: i64, half: u64 },
    #[error("expansion is incomplete up to its bound")]
    IncompleteExpansion,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
