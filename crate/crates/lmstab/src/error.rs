use thiserror::Error;

/// Errors surfaced by the engine. Precondition and sampling failures are
/// user-visible outcomes; `Inconsistency` always indicates a bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("homogeneity violation: {0}")]
    Homogeneity(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("characteristic {p} divides degree {d}; smoothness certificate refused")]
    CharDividesDegree { p: u64, d: i64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("sampling exhausted after {attempts} attempts; last failed predicate: {predicate}")]
    Sampling { predicate: String, attempts: u32 },

    #[error("destabilizer witness unavailable: {0}")]
    WitnessUnavailable(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("zero module has no rank/c1 data")]
    ZeroModule,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
