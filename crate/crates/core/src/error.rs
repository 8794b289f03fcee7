use thiserror::Error;

use crate::citation::Citation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("profile has no blocks")]
    EmptyProfile,

    #[error("block {index} has rank 0; torsion-free pieces have positive rank")]
    ZeroRankBlock { index: usize },

    #[error("profile is not in HN-normal form (slopes must be strictly decreasing); normalize it first")]
    NotNormalized,

    #[error("polygons have different total rank ({left} vs {right})")]
    RankMismatch { left: u64, right: u64 },

    #[error("polygons have different total degree ({left} vs {right})")]
    DegreeMismatch { left: String, right: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: String,
        range: String,
    },

    #[error("T^{l} of a rank-{r} sheaf in characteristic {p} is the zero sheaf; its instability is undefined")]
    ZeroSheaf { r: u64, p: u64, l: u64 },

    #[error("missing required input: {0}")]
    MissingInput(&'static str),

    #[error("invalid variety context: {0}")]
    InvalidContext(String),

    #[error("hypotheses of {citation} not satisfied: {}", failed.join("; "))]
    Hypothesis {
        citation: Citation,
        failed: Vec<String>,
    },

    #[error("claimed filtration is not slope-ordered: {0}")]
    SlopeOrder(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("{0} does not fit in a 64-bit rank")]
    RankOverflow(String),
}

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Hypothesis,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Hypothesis { .. } => ErrorKind::Hypothesis,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn out_of_range(what: &'static str, value: impl ToString, range: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value: value.to_string(),
            range: range.into(),
        }
    }
}
