use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element {0:?} does not belong to group {1:?}")]
    NotInGroup(Vec<u64>, Vec<u64>),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
    #[error("duplicate element {0:?} in set")]
    DuplicateElement(Vec<u64>),
    #[error("set is not a difference set (classified as {0})")]
    NotDifferenceSet(String),
    #[error("set classifies as neither a difference set nor an almost difference set")]
    Unclassified,
    #[error("subgroup is not closed under the group operation")]
    NotSubgroup,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{divisor} does not divide p - 1 = {p_minus_1}")]
    BadExponent { divisor: u64, p_minus_1: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown sporadic set id {0:?}")]
    UnknownSporadic(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
