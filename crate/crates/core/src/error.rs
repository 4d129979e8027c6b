use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A table ring failed one of the ring axioms; the indices name the failing triple.
    #[error("tables do not define a commutative unital ring: {axiom} fails at ({a}, {b}, {c})")]
    NonRing {
        axiom: String,
        a: usize,
        b: usize,
        c: usize,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("table rings are limited to 64 elements, got {0}")]
    UnsupportedSize(usize),
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("operands do not belong to the same ring")]
    RingMismatch,
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("idempotents do not form a complete orthogonal set")]
    IncompleteCover,
    #[error("search incomplete: {0}")]
    IncompleteSearch(String),
    #[error("budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("operation requires a finite ring")]
    InfiniteRing,
    #[error("ring is not clean")]
    NotCleanRing,
    #[error("ring is not J-clean")]
    PreconditionNotJClean,
    #[error("2 is not a unit in this ring")]
    TwoNotUnit,
    #[error("element is not in 1 + rad(R)")]
    NotInOnePlusRadical,
    #[error("pair is not an element of the module")]
    NotInModule,
    #[error("certificate verification failed: {0}")]
    VerificationFailed(String),
    #[error("cannot parse input: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
