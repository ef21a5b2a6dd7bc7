use thiserror::Error;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("divisor has a zero component (degenerate element)")]
    DegenerateDivisor,
    #[error("input is not strictly inside the first octant: {0:?}")]
    OutOfOctant([f64; 3]),
    #[error("vector has a zero component: {0:?}")]
    NullComponent([f64; 3]),
    #[error("norm must be positive, got {0}")]
    NonPositiveNorm(f64),
    #[error("bingle vector is not trace-free (trace = {0:e})")]
    NotTraceZero(f64),
    #[error("scaling vector is not orthogonal to the bingle vector (residual = {0:e})")]
    NotOrthogonal(f64),
    #[error("argument must be positive, got {0}")]
    NonPositive(f64),
    #[error("value is not finite")]
    NonFinite,
    #[error("point is not on the unit indicatrix (x1*x2*x3 = {0})")]
    NotUnit(f64),
    #[error("geodesic exponents violate q1*q2*(q1+q2) = 1 (got {0})")]
    ConstraintViolated(f64),
    #[error("points coincide")]
    CoincidentPoints,
    #[error("points are separated by a null direction of the bi-space")]
    NullSeparated,
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("two of the points have the same bi-projection")]
    DegeneratePair,
    #[error("points are not metrically coplanar (residual = {0:e})")]
    NotCoplanar(f64),
    #[error("middle point does not lie between the outer points")]
    NotBetween,
    #[error("cubic has complex roots (discriminant = {0:e})")]
    ComplexRoots(f64),
    #[error("director triple does not identify a unit-circle component: {0:?}")]
    Ambiguous([f64; 3]),
    #[error("outside the domain of the formula: {0}")]
    DomainError(String),
    #[error("value {0} is outside the invertible range")]
    OutOfRange(f64),
    #[error("cfh value is zero")]
    ZeroCosine,
    #[error("denominator vanishes")]
    DegenerateDenominator,
    #[error("vectors lie in different octants")]
    MixedOctant,
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateDivisor => "DegenerateDivisor",
            Error::OutOfOctant(_) => "OutOfOctant",
            Error::NullComponent(_) => "NullComponent",
            Error::NonPositiveNorm(_) => "NonPositiveNorm",
            Error::NotTraceZero(_) => "NotTraceZero",
            Error::NotOrthogonal(_) => "NotOrthogonal",
            Error::NonPositive(_) => "NonPositive",
            Error::NonFinite => "NonFinite",
            Error::NotUnit(_) => "NotUnit",
            Error::ConstraintViolated(_) => "ConstraintViolated",
            Error::CoincidentPoints => "CoincidentPoints",
            Error::NullSeparated => "NullSeparated",
            Error::InvalidInterval(..) => "InvalidInterval",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::QuadratureFailure(_) => "QuadratureFailure",
            Error::RootFinding(_) => "RootFinding",
            Error::DegeneratePair => "DegeneratePair",
            Error::NotCoplanar(_) => "NotCoplanar",
            Error::NotBetween => "NotBetween",
            Error::ComplexRoots(_) => "ComplexRoots",
            Error::Ambiguous(_) => "Ambiguous",
            Error::DomainError(_) => "DomainError",
            Error::OutOfRange(_) => "OutOfRange",
            Error::ZeroCosine => "ZeroCosine",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::MixedOctant => "MixedOctant",
        }
    }

    /// True for failures of an iterative numerical method, as opposed to
    /// inputs that violate a precondition.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureFailure(_) | Error::RootFinding(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
