use thiserror::Error;

/// Errors raised by the balancing library.
///
/// Variants split into two families: input/hypothesis problems (the caller
/// handed us something outside an operation's contract) and integrity
/// problems (a computed certificate or postcondition did not hold).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("polynomial degree {degree} exceeds the grid design degree {design}")]
    DegreeExceedsGrid { degree: usize, design: usize },

    #[error("grid multiplier M = {0} must be at least 4 (certificate needs M > pi)")]
    MultiplierTooSmall(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("n = {n} exceeds the brute-force cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("hypothesis violated: {what} (value {value}, bound {bound})")]
    Hypothesis {
        what: String,
        value: f64,
        bound: f64,
    },

    #[error("postcondition violated: {0}")]
    Postcondition(String),

    #[error("unknown solver `{0}`")]
    UnknownSolver(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// True for failures of the math itself (as opposed to bad input).
    pub fn is_integrity(&self) -> bool {
        matches!(self, Error::Postcondition(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
