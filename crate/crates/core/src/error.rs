//! Error type shared by all library modules.

/// Which side of the level-curve domain a query fell off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainSide {
    /// The level-set cosine exceeded +1: the query sits between the branch
    /// points (or above the reach of a sub-critical curve).
    AboveUpper,
    /// The level-set cosine fell below -1: the query sits under the curve's
    /// lowest point.
    BelowLower,
}

impl std::fmt::Display for DomainSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainSide::AboveUpper => write!(f, "cosine above +1"),
            DomainSide::BelowLower => write!(f, "cosine below -1"),
        }
    }
}

/// Everything that can go wrong in the library.
///
/// Variants split into domain preconditions (the caller asked for something
/// outside the model: `NonPositiveParameter`, `ValidityViolation`,
/// `NotSuperCritical`, `OutOfDomain`, `AboveSeparatrix`, `AboveCritical`),
/// input-shape problems (`EmptyInput`, `InvalidInput`, `InvalidTolerance`),
/// and internal numerical failures that indicate a bug or a genuinely
/// intractable request (`ConvergenceFailure`, `StepSizeUnderflow`,
/// `QuadratureNonConvergence`, `MonotonicityViolation`, `SignViolation`).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error(
        "validity condition failed: epsilon*k*exp(epsilon*k) = {product} exceeds 1 \
         (steepness too large for the linear model)"
    )]
    ValidityViolation { product: f64 },

    #[error("iteration failed to converge: {context}")]
    ConvergenceFailure { context: &'static str },

    #[error("level alpha = {alpha} is not above the critical level alpha* = {alpha_star}")]
    NotSuperCritical { alpha: f64, alpha_star: f64 },

    #[error("Y = {y} is outside the level-curve domain ({side})")]
    OutOfDomain { y: f64, side: DomainSide },

    #[error("empty input: {what}")]
    EmptyInput { what: &'static str },

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },

    #[error("tolerance {tol} outside the supported range [1e-13, 1e-3]")]
    InvalidTolerance { tol: f64 },

    #[error("step size underflow at t = {t}: the state is blowing up (above-separatrix motion?)")]
    StepSizeUnderflow { t: f64 },

    #[error(
        "start depth Y0 = {y0} is not below the separatrix crossing Y_pi(alpha*) = {y_pi_star}; \
         no closed orbit exists there"
    )]
    AboveSeparatrix { y0: f64, y_pi_star: f64 },

    #[error("velocity sign pattern violated at t = {t}: X = {x}, dx/dt = {dxdt}, dy/dt = {dydt}")]
    SignViolation {
        t: f64,
        x: f64,
        dxdt: f64,
        dydt: f64,
    },

    #[error("depth Y = {y} is at or above the critical level (limit {limit}); period diverges")]
    AboveCritical { y: f64, limit: f64 },

    #[error("quadrature failed to converge: {context}")]
    QuadratureNonConvergence { context: &'static str },

    #[error("drift profile is not strictly decreasing at row {index} (values {prev} -> {next})")]
    MonotonicityViolation { index: usize, prev: f64, next: f64 },

    #[error("level curve {index} (alpha = {alpha}) failed: {source}")]
    LevelCurveFailed {
        index: usize,
        alpha: f64,
        #[source]
        source: Box<Error>,
    },
}
