use crate::model::Violation;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by solvers, oracles and parsers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot parse rational number from {0:?}")]
    ParseRational(String),

    #[error("instance is structurally invalid: {}", format_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("piecewise function needs at least two breakpoints")]
    TooFewBreakpoints,

    #[error("breakpoints must be strictly increasing")]
    UnsortedBreakpoints,

    #[error("breakpoint and value counts differ ({breakpoints} vs {values})")]
    LengthMismatch { breakpoints: usize, values: usize },

    #[error("functions are defined on different domains")]
    DomainMismatch,

    #[error("argument {argument} lies outside the function domain")]
    OutOfDomain { argument: String },

    #[error("empty maximization interval: lo > hi")]
    EmptyInterval,

    #[error("weighted sum needs at least one term")]
    EmptySum,

    #[error("item {item} has a {found} distribution but the method requires {expected}")]
    MethodMismatch {
        item: usize,
        expected: &'static str,
        found: &'static str,
    },

    #[error("{what} = {actual} exceeds the supported limit {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("predicted working set of {predicted_bytes} bytes exceeds the memory cap of {cap_bytes} bytes")]
    MemoryCap {
        predicted_bytes: u64,
        cap_bytes: u64,
    },

    #[error("invalid finite support: {0}")]
    Support(String),

    #[error("scenario sampler failed: {0}")]
    Sampler(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("invalid reduction parameters: {0}")]
    Reduction(String),

    #[error("cannot parse JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Format(String),
}

fn format_violations(violations: &[Violation]) -> String {
    let mut out = String::new();
    for (k, v) in violations.iter().enumerate() {
        if k > 0 {
            out.push_str("; ");
        }
        out.push_str(&v.to_string());
    }
    out
}
