use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Structurally malformed input: dimension mismatches, invalid indices,
    /// out-of-range values. Distinct from LP infeasibility.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A relation that was required to be a preorder is not one.
    #[error("relation is not a preorder: {0}")]
    NotPreorder(String),

    /// A preference-system operation needed designated top/bottom elements.
    #[error("preference system has no designated {0} element")]
    MissingExtremum(&'static str),

    /// Granularity parameter outside the half-open unit interval.
    #[error("delta {0} is outside [0, 1)")]
    DeltaOutOfRange(f64),

    /// The preference system admits no normalized representation at all.
    #[error("preference system is not 0-consistent; no representation exists")]
    ZeroInconsistent,

    /// The constraint system for the requested delta is infeasible.
    #[error("preference system is not {0}-consistent")]
    DeltaInconsistent(f64),

    /// A requested delta exceeds the computed maximal consistent delta.
    #[error("delta {delta} exceeds the maximal consistent delta {delta_max}")]
    DeltaExceedsMax { delta: f64, delta_max: f64 },

    /// Exact vertex enumeration was refused by the size guard.
    #[error(
        "credal set too large for exact enumeration: {states} states, {constraints} constraints \
         (guard: {max_states} states, {max_constraints} constraints)"
    )]
    TooLargeForEnumeration {
        states: usize,
        constraints: usize,
        max_states: usize,
        max_constraints: usize,
    },

    /// The credal constraint system describes an empty set.
    #[error("credal constraint system is infeasible")]
    InfeasibleCredal,

    /// An operation required extreme points but none were attached.
    #[error("credal set has no extreme points attached")]
    NoExtremePoints,

    /// Problem-file validation failure, with field context.
    #[error("validation error: {0}")]
    Validation(String),

    /// Problem-file JSON syntax error.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// Invariant violation that indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the CLI: 1 for input/validation problems,
    /// 2 for infeasibility or inconsistency verdicts.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ZeroInconsistent
            | Error::DeltaInconsistent(_)
            | Error::DeltaExceedsMax { .. }
            | Error::InfeasibleCredal => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
