use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SocoError {
    #[error("schedule is infeasible at slot {slot}: load {load} exceeds capacity {capacity}")]
    InfeasibleSchedule { slot: usize, load: f64, capacity: f64 },
    #[error("configuration {value} at slot {slot} (dimension {dim}) is outside [0, {bound}]")]
    OutOfBounds { slot: usize, dim: usize, value: f64, bound: f64 },
    #[error("no hitting cost available for slot {0}")]
    NoCostAvailable(usize),
    #[error("the time horizon is unknown")]
    UnknownHorizon,
    #[error("baseline cost must be positive: {0}")]
    DegenerateBaseline(String),
    #[error("no feasible point found: {0}")]
    Infeasible(String),
    #[error("did not converge within {budget} evaluations: {what}")]
    NonConverged { what: String, budget: usize },
    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("problem too large: {size} exceeds limit {limit}")]
    TooLarge { size: f64, limit: f64 },
    #[error("server type {0} is inefficient or duplicated")]
    InefficientServerType(usize),
    #[error("load at slot {slot} is infeasible: {reason}")]
    InfeasibleLoad { slot: usize, reason: String },
    #[error("sub-slot budget exceeded: {needed} > {cap}")]
    BudgetExceeded { needed: usize, cap: usize },
    #[error("level {level} is below the minimal hitting cost {min}")]
    InfeasibleLevel { level: f64, min: f64 },
    #[error("root bracket failure: {0}")]
    RootBracketFailure(String),
    #[error("insufficient energy supply: demand {demand} exceeds supply {supply}")]
    InsufficientSupply { demand: f64, supply: f64 },
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("negative count at line {0}")]
    NegativeCount(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl SocoError {
    /// Stable machine-readable code used by the CLI, the wire protocol and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            SocoError::InfeasibleSchedule { .. } => "infeasible_schedule",
            SocoError::OutOfBounds { .. } => "out_of_bounds",
            SocoError::NoCostAvailable(_) => "no_cost_available",
            SocoError::UnknownHorizon => "unknown_horizon",
            SocoError::DegenerateBaseline(_) => "degenerate_baseline",
            SocoError::Infeasible(_) => "infeasible",
            SocoError::NonConverged { .. } => "non_converged",
            SocoError::NoSignChange { .. } => "no_sign_change",
            SocoError::QuadratureFailure(_) => "quadrature_failure",
            SocoError::NonFinite(_) => "non_finite",
            SocoError::TooLarge { .. } => "too_large",
            SocoError::InefficientServerType(_) => "inefficient_server_type",
            SocoError::InfeasibleLoad { .. } => "infeasible_load",
            SocoError::BudgetExceeded { .. } => "budget_exceeded",
            SocoError::InfeasibleLevel { .. } => "infeasible_level",
            SocoError::RootBracketFailure(_) => "root_bracket_failure",
            SocoError::InsufficientSupply { .. } => "insufficient_supply",
            SocoError::ParseError { .. } => "parse_error",
            SocoError::NegativeCount(_) => "negative_count",
            SocoError::InvalidArgument(_) => "invalid_argument",
            SocoError::Protocol(_) => "protocol",
            SocoError::UnknownSession(_) => "unknown_session",
            SocoError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for SocoError {
    fn from(e: std::io::Error) -> Self {
        SocoError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SocoError>;
