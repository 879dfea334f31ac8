use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by the module that raises them; the CLI maps each
/// variant to a stable string code via [`Error::code`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    // construction
    #[error("zero {value} of factor {factor} has modulus >= 1")]
    ZeroOutsideDisc { factor: char, value: String },
    #[error("degree matrix has det = {det} <= 0")]
    DegenerateDeterminant { det: i64 },
    #[error("factor {factor} has no zeros")]
    EmptyFactor { factor: char },
    #[error("rotation seed must be nonzero")]
    ZeroRotationSeed,

    // exact algebra
    #[error("term budget exceeded: {needed} terms requested, limit {limit}")]
    ResourceBudget { needed: usize, limit: usize },
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("modular reconstruction failed after {primes} primes")]
    ReconstructionFailed { primes: usize },

    // geometry
    #[error("degenerate zero configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("extension to exceptional divisor needs nonzero zeros of {factor}")]
    ZeroAtOrigin { factor: char },
    #[error("coincident zeros make the covering degree drop: {0}")]
    CoincidentZeros(String),
    #[error("line is not a pole line")]
    NotAPoleLine,

    // topology
    #[error("map is not generic: {0}")]
    NotGeneric(String),
    #[error("map is not monomial")]
    NotMonomial,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    // numerics
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("degenerate polynomial system: {0}")]
    DegenerateSystem(String),
    #[error("solver deficiency: {0}")]
    SolverDeficiency(String),
    #[error("argument lift jumped by more than pi/2 at the finest subdivision")]
    LiftDiscontinuity,
    #[error("curve refinement exceeded {limit} points")]
    RefinementBudget { limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroOutsideDisc { .. } => "ZeroOutsideDisc",
            Error::DegenerateDeterminant { .. } => "DegenerateDeterminant",
            Error::EmptyFactor { .. } => "EmptyFactor",
            Error::ZeroRotationSeed => "ZeroRotationSeed",
            Error::ResourceBudget { .. } => "ResourceBudget",
            Error::ZeroGcd => "ZeroGcd",
            Error::ReconstructionFailed { .. } => "ReconstructionFailed",
            Error::DegenerateConfiguration(_) => "DegenerateConfiguration",
            Error::ZeroAtOrigin { .. } => "ZeroAtOrigin",
            Error::CoincidentZeros(_) => "CoincidentZeros",
            Error::NotAPoleLine => "NotAPoleLine",
            Error::NotGeneric(_) => "NotGeneric",
            Error::NotMonomial => "NotMonomial",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::NonConvergence(_) => "NonConvergence",
            Error::DegenerateSystem(_) => "DegenerateSystem",
            Error::SolverDeficiency(_) => "SolverDeficiency",
            Error::LiftDiscontinuity => "LiftDiscontinuity",
            Error::RefinementBudget { .. } => "RefinementBudget",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// Coarse error class, used for process exit codes.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::ZeroOutsideDisc { .. }
            | Error::DegenerateDeterminant { .. }
            | Error::EmptyFactor { .. }
            | Error::ZeroRotationSeed
            | Error::InvalidArgument(_) => ErrorClass::Validation,
            Error::ResourceBudget { .. } | Error::RefinementBudget { .. } => ErrorClass::Resource,
            Error::ZeroGcd
            | Error::ReconstructionFailed { .. }
            | Error::DegenerateConfiguration(_)
            | Error::ZeroAtOrigin { .. }
            | Error::CoincidentZeros(_)
            | Error::NotAPoleLine
            | Error::NotGeneric(_)
            | Error::NotMonomial
            | Error::InvariantViolation(_) => ErrorClass::Algebraic,
            Error::NonConvergence(_)
            | Error::DegenerateSystem(_)
            | Error::SolverDeficiency(_)
            | Error::LiftDiscontinuity => ErrorClass::Numeric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Resource,
    Algebraic,
    Numeric,
}

pub type Result<T> = std::result::Result<T, Error>;
