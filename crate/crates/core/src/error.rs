use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("breakpoint list needs at least two points")]
    TooFewBreakpoints,
    #[error("breakpoint x-values are not strictly increasing at index {index}")]
    NonMonotoneBreakpoints { index: usize },
    #[error("value {y} at x = {x} lies outside the domain")]
    NotSelfMap { x: Rational, y: Rational },
    #[error("point {0} lies outside the domain")]
    OutOfDomain(Rational),
    #[error("interval endpoints out of order: {lo} > {hi}")]
    InvalidInterval { lo: Rational, hi: Rational },
    #[error("piece budget of {budget} breakpoints exceeded")]
    PieceBudgetExceeded { budget: usize },
    #[error("walk budget of {budget} walks exceeded")]
    WalkBudgetExceeded { budget: usize },
    #[error("iterate count must be at least 1")]
    ZeroIterate,
    #[error("image of the source interval does not cover the target interval")]
    NotCovering,
    #[error("clamp bounds [{lo}, {hi}] are not a subinterval of the domain")]
    BadClampBounds { lo: Rational, hi: Rational },
    #[error("invalid pattern: {0}")]
    InvalidPattern(&'static str),
    #[error("node sequence is not a closed walk in the Markov graph")]
    NotAWalk,
    #[error("period {0} is not an odd integer >= 3")]
    NotOddPeriod(usize),
    #[error("period {0} is even")]
    EvenPeriod(usize),
    #[error("points do not form a single periodic orbit of the map")]
    NotAnOrbit,
    #[error("orbit period {0} is too small (need at least 3)")]
    PeriodTooSmall(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("interval loop fails the covering condition at position {index}")]
    NotACycle { index: usize },
    #[error("no point of least period {period} follows the interval loop")]
    NoLeastPeriodWitness { period: usize },
    #[error("period {period} is not produced by the {case} construction")]
    UnsupportedPeriodForCase { period: usize, case: &'static str },
    #[error("no orbit of least period {period} inside the requested interval")]
    NoSuchOrbit { period: usize },
    #[error("orbit hulls fail to nest strictly at level {level}")]
    ChainNotNested { level: usize },
    #[error("integer overflow")]
    Overflow,
}

impl Error {
    /// Budget errors signal an enumeration limit rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::PieceBudgetExceeded { .. } | Error::WalkBudgetExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
