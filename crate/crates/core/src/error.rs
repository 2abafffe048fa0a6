use num_rational::Ratio;
use thiserror::Error;

type Exp = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("series is zero to its known precision")]
    ZeroSeries,
    #[error("insufficient precision: need t^{needed}, series known mod t^{available}")]
    InsufficientPrecision { needed: Exp, available: Exp },
    #[error("ramification index {q_new} is not a multiple of {q}")]
    NotAMultiple { q: i64, q_new: i64 },
    #[error("ramification index must be positive, got {0}")]
    InvalidRamification(i64),
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("coefficient has negative valuation where an integral one is required")]
    NotIntegral,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("not smooth enough: residual valuation {nu} <= 2 * jacobian valuation {e}")]
    NotSmoothEnough { nu: String, e: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid minor: {0}")]
    InvalidMinor(String),
    #[error("equations outside the chosen minor are not satisfied: {0}")]
    UnselectedRows(String),
    #[error("point does not satisfy the claimed residual bound t^{0}")]
    ResidualNotMet(Exp),
    #[error("invalid quadruple: {0}")]
    InvalidQuadruple(String),
    #[error("empty decomposition: at least one component is required")]
    EmptyDecomposition,
    #[error("u = {u} does not match the {found} supplied components")]
    ComponentCountMismatch { u: u64, found: usize },
    #[error("residue solver cannot handle this system: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("search budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("degree {d} > n = {n}: outside the C1 regime")]
    RegimeViolation { d: u32, n: u32 },
    #[error("form must be homogeneous")]
    NotHomogeneous,
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("radicand class is zero: the Kummer extension is trivial")]
    TrivialExtension,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("coefficient classes {first} and {second} coincide")]
    DuplicateCoefficientClass { first: usize, second: usize },
    #[error("infeasible: W and W' intersect trivially")]
    Infeasible,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalGlobalError {
    #[error("arguments must be nonzero")]
    ZeroArgument,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{x} is not in the norm group: obstruction at the real place")]
    RefusedNonMember { x: String },
    #[error("no witness found with |d| <= {bound}")]
    NotFoundWithinBound { bound: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}
