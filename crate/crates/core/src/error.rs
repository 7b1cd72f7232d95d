use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A rational literal did not match `-?digits(/digits)?` with a positive
    /// denominator.
    InvalidRational(String),
    /// A structural or numeric MDP invariant does not hold.
    InvalidMdp(String),
    /// A binary matrix is ragged or too wide.
    InvalidMatrix(String),
    /// A policy does not fit the instance it is used with.
    InvalidPolicy(String),
    /// A switch set lists the same state more than once.
    StateRepeated(usize),
    /// Two vectors that must be compared have different lengths.
    LengthMismatch { left: usize, right: usize },
    /// An argument is outside the domain of an operation.
    OutOfRange(String),
    /// Enumerating `count` policies would exceed the configured guard.
    BudgetExceeded { count: u128, limit: u64 },
    /// `greedy_step` was called on a policy without improvement states.
    EmptyImprovementSet,
    /// Policy iteration did not terminate within the iteration cap.
    IterationCapExceeded(u64),
    /// A group handed to the tensor rank check does not share its
    /// improvement states.
    InconsistentStateSet,
    /// A precondition of an operation does not hold.
    Precondition(String),
    /// A proof-backed search failed, meaning a theorem was contradicted.
    TheoremViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRational(s) => write!(f, "invalid rational literal {s:?}"),
            Error::InvalidMdp(s) => write!(f, "invalid MDP: {s}"),
            Error::InvalidMatrix(s) => write!(f, "invalid matrix: {s}"),
            Error::InvalidPolicy(s) => write!(f, "invalid policy: {s}"),
            Error::StateRepeated(s) => write!(f, "switch set is not well-defined: state {s} repeated"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::OutOfRange(s) => write!(f, "argument out of range: {s}"),
            Error::BudgetExceeded { count, limit } => {
                write!(f, "enumeration of {count} policies exceeds the limit of {limit}")
            }
            Error::EmptyImprovementSet => write!(f, "empty improvement set: policy is optimal"),
            Error::IterationCapExceeded(cap) => {
                write!(f, "policy iteration exceeded the cap of {cap} iterations")
            }
            Error::InconsistentStateSet => {
                write!(f, "group members do not share the same improvement states")
            }
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
            Error::TheoremViolation(s) => write!(f, "THEOREM VIOLATION: {s}"),
        }
    }
}

impl core::error::Error for Error {}
