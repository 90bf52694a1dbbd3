use std::fmt;

use num_bigint::BigUint;

use crate::bdd::Violation;

/// Errors reported by the census, generation and I/O operations.
///
/// Budget errors (guards on the number of variables, stream sizes,
/// completion weights and the memoization cap) are distinguished from
/// domain errors so that callers can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An assignment vector does not have exactly `k` entries.
    AssignmentLength { expected: u32, got: usize },
    /// A variable count exceeds the guard of the requested operation.
    VarsOutOfRange { vars: u32, limit: u32 },
    /// A rank lies outside `[0, N(n, k))`.
    RankOutOfRange { count: BigUint },
    /// No BDD with the requested size and variable count exists.
    EmptyClass { size: u32, vars: u32 },
    /// The argument is not a valid BDD; the violated constraints are listed.
    InvalidBdd(Vec<Violation>),
    /// The tree is not the spine of any BDD (some node has weight zero or less).
    InvalidSpine,
    /// An exhaustive stream would yield more objects than the guard allows.
    StreamGuardExceeded { count: BigUint, guard: u64 },
    /// A spine's completion weight exceeds the enumeration guard.
    CompletionGuardExceeded { weight: BigUint, guard: u64 },
    /// The memoization table outgrew its configured memory cap.
    MemoLimitExceeded { limit_mb: u64 },
    /// A BDD text file could not be parsed; `line` is 1-based.
    Parse { line: usize, message: String },
}

impl Error {
    /// True for guard violations (as opposed to domain errors).
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::VarsOutOfRange { .. }
                | Error::StreamGuardExceeded { .. }
                | Error::CompletionGuardExceeded { .. }
                | Error::MemoLimitExceeded { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AssignmentLength { expected, got } => {
                write!(f, "assignment has {got} bits, expected {expected}")
            }
            Error::VarsOutOfRange { vars, limit } => {
                write!(f, "{vars} variables exceed the supported limit of {limit}")
            }
            Error::RankOutOfRange { count } => write!(f, "rank out of range [0,{count})"),
            Error::EmptyClass { size, vars } => {
                write!(f, "no BDD of size {size} over {vars} variables exists")
            }
            Error::InvalidBdd(violations) => {
                write!(f, "invalid BDD: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            Error::InvalidSpine => write!(f, "tree is not the spine of any BDD"),
            Error::StreamGuardExceeded { count, guard } => {
                write!(f, "stream of {count} BDDs exceeds the guard of {guard}")
            }
            Error::CompletionGuardExceeded { weight, guard } => {
                write!(f, "completion weight {weight} exceeds the guard of {guard}")
            }
            Error::MemoLimitExceeded { limit_mb } => {
                write!(f, "memoization table exceeded its cap of {limit_mb} MiB")
            }
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl std::error::Error for Error {}
