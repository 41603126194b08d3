//! Error type shared by every module.

use thiserror::Error;

/// Everything that can go wrong in a computation or a CLI run.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("orbit escaped at step {step}")]
    Escaped { step: usize },
    #[error("no orientation reversing fixed point")]
    NoSuchFixedPoint,
    #[error("branch ambiguity at inverse step {step}")]
    BranchAmbiguity { step: usize },
    #[error("preimage search stalled (attracting cycle suspected)")]
    PeriodicAttractor,
    #[error("renormalizable: no deeper nice point within depth {depth}")]
    Renormalizable { depth: usize },
    #[error("critical orbit did not return within {budget} steps")]
    BudgetExhausted { budget: usize },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("closest-return sequence exhausted after {found} terms")]
    DepthExhausted { found: usize },
    #[error("central branch has a high return")]
    HighReturn,
    #[error("central orbit never leaves the central domain (attractor)")]
    AttractorDetected,
    #[error("interval is empty: endpoint is already a critical preimage")]
    EmptyInterval,
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("no admissible intersection: {0}")]
    NoIntersection(String),
    #[error("sampling too coarse near sample {index}")]
    SamplingTooCoarse { index: usize },
    #[error("monotone extension too short at inverse step {step}")]
    ExtensionTooShort { step: usize },
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),
    #[error("fit-in condition violated: ratio {ratio}")]
    FitinViolated { ratio: f64 },
    #[error("pulled-back boundary leaves the domain (margin {margin:e})")]
    NotContained { margin: f64 },
    #[error("domains overlap: {0}")]
    DomainOverlap(String),
    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    #[error("root has minimal period {found}, wanted {wanted}")]
    WrongMinimalPeriod { found: usize, wanted: usize },
    #[error("no parameter with the requested combinatorics in bracket (depth {depth})")]
    NoParameterInBracket { depth: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
