use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: class lives on a P^{left}-bundle, ring is a P^{right}-bundle")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("unsupported degree {0}; expected one of 1, 2, 3, 4, 5, 8, 9")]
    UnsupportedDegree(u8),

    #[error("degree {degree} expects a bundle of rank {expected}, got rank {got}")]
    WrongRank {
        degree: u8,
        expected: usize,
        got: usize,
    },

    #[error("twist data {got} does not fit degree {degree}")]
    WrongTwists { degree: u8, got: String },

    #[error("twist sum {0} is odd; the Pfaffian model needs an even sum")]
    OddTwistSum(i64),

    #[error("weighted bundle needs b = -2k and c = -3k, got (b, c, k) = ({b}, {c}, {k})")]
    WeightedTwistMismatch { b: i64, c: i64, k: i64 },

    #[error("curve class of D is not defined in degree {0}")]
    NoDClass(u8),

    #[error("slope is infinite: denominator vanishes")]
    InfiniteSlope,

    #[error("enumeration incomplete for degree {degree}: admissible candidate {candidate} touches the search box boundary")]
    BoundaryHit { degree: u8, candidate: String },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("unknown case id {0}")]
    UnknownCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
