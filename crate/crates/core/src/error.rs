use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed token {0:?}")]
    MalformedToken(String),
    #[error("duplicate value {value}")]
    DuplicateValue { value: u32 },
    #[error("value {value} out of range 1..={n}")]
    ValueOutOfRange { value: u64, n: usize },

    #[error("n = {n} exceeds the enumeration limit {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("t = {t} outside the supported range 1..={max}")]
    StackCount { t: usize, max: usize },
    #[error("unknown letter {letter:?} at position {position}")]
    UnknownLetter { letter: char, position: usize },
    #[error("unequal letter counts: {counts:?}")]
    UnequalCounts { counts: Vec<usize> },
    #[error("ballot violation at position {position}: prefix has more {later:?} than {earlier:?}")]
    BallotViolation {
        /// 1-based length of the first offending prefix.
        position: usize,
        earlier: char,
        later: char,
    },
    #[error("operation requires a {expected}-stack word, got t = {actual}")]
    WrongStackCount { expected: usize, actual: usize },
    #[error("{bb_factors} BB factors leave a negative number of free A's for n = {n}")]
    TooManyBbFactors { bb_factors: usize, n: usize },

    #[error("k = {k} outside 1..={max} for n = {n}")]
    SummandIndex { k: i64, n: usize, max: usize },
    #[error("x = {0} outside the domain of g")]
    OutOfDomain(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("g is not unimodal on the scan grid: local maxima at {0:?}")]
    NotUnimodal(Vec<f64>),

    #[error("cache I/O: {0}")]
    Cache(String),
}
