use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("values outside the spectral hull: {0}")]
    BoundsViolated(String),

    #[error("sequence is not in class F (some cut sum diverges at every threshold)")]
    NotInClassF,

    #[error("cut sums diverge at B/2; interior majorization needs a summable sequence")]
    NotSummable,

    #[error("interior eigenvalue {0} has infinite multiplicity")]
    InteriorInfinite(String),

    #[error("spectrum needs at least two infinite multiplicities, found {0}")]
    NotEnoughInfinite(usize),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("sequence is not nondecreasing: {0}")]
    NotNondecreasing(String),

    #[error("lower tail is not summable: {0}")]
    NotSummableLowerTail(String),

    #[error("moved mass {requested} exceeds the available budget {available}")]
    BudgetExceeded { requested: String, available: String },

    #[error("ordering violated: {0}")]
    OrderViolated(String),

    #[error("no receiver entry in {0}")]
    NoReceiver(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
