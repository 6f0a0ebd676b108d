use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the algorithmic core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    Domain(String),
    /// A fit was requested with no duels and no regularization.
    DegenerateFit,
    /// Items that never appear in a duel cannot be scored without regularization.
    UnidentifiableItems(Vec<String>),
    /// A score table has no entry for an item referenced by a duel.
    MissingScore(String),
    /// The two groups of a schedule differ in size.
    SizeMismatch { group_a: usize, group_b: usize },
    /// A schedule with the requested shape cannot be built.
    InfeasibleSchedule(String),
    /// Too many bootstrap replicates failed to produce a statistic.
    UnstableBootstrap { discarded: usize, replicates: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by arithmetic on valid inputs rather than by
    /// malformed inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::UnstableBootstrap { .. } | Error::DegenerateFit)
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DegenerateFit => f.write_str("cannot fit scores: no duels and no regularization"),
            Error::UnidentifiableItems(ids) => {
                write!(f, "items without any duel cannot be scored: {}", ids.join(", "))
            }
            Error::MissingScore(id) => write!(f, "no score for item `{id}`"),
            Error::SizeMismatch { group_a, group_b } => {
                write!(f, "group sizes differ: {group_a} vs {group_b}")
            }
            Error::InfeasibleSchedule(msg) => write!(f, "infeasible schedule: {msg}"),
            Error::UnstableBootstrap { discarded, replicates } => write!(
                f,
                "unstable bootstrap: {discarded} of {replicates} replicates discarded"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
