use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element {element} is outside a universe of size {size}")]
    ElementOutOfRange { element: u64, size: u64 },
    #[error("concept {concept} is not defined over this universe ({reason})")]
    UniverseMismatch { concept: String, reason: String },
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("database is empty")]
    EmptyDatabase,
    #[error("row {row} has {found} labels, expected {expected}")]
    LabelCountMismatch { row: usize, found: usize, expected: usize },
    #[error("label index {index} out of range for k = {k}")]
    LabelOutOfRange { index: usize, k: usize },
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("candidate list is empty")]
    EmptyCandidates,
    #[error("outcome sets differ in size ({left} vs {right})")]
    OutcomeMismatch { left: usize, right: usize },
    #[error("a_dist requires best score >= second score (gap = {gap})")]
    NegativeGap { gap: f64 },
    #[error("ledger is empty")]
    EmptyLedger,
    #[error("advanced composition needs identical charges; found {first:?} and {other:?}")]
    HeterogeneousCharges { first: (f64, f64), other: (f64, f64) },
    #[error(
        "enumeration budget exceeded: {candidates} candidates > budget {budget}; \
         use the point sanitizer where the class allows it"
    )]
    BudgetExceeded { candidates: f64, budget: u64 },
    #[error("insufficient rows: need at least {needed}, have {have}")]
    InsufficientRows { needed: usize, have: usize },
    #[error("codebook length {k} is not a multiple of n - 1 = {divisor}")]
    CodeLengthNotDivisible { k: usize, divisor: usize },
    #[error("codebook length {k} is below the security bound {required}")]
    CodeTooShort { k: usize, required: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

/// Checks `lo < value < hi` and reports the offending parameter otherwise.
pub(crate) fn open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, value, "must lie in (0, 1)"))
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, value, "must be positive and finite"))
    }
}
