use thiserror::Error;

/// Errors raised anywhere in the classify / solve / verify pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("incompatible radicands: sqrt({lhs}) and sqrt({rhs}) do not generate the same field")]
    IncompatibleRadicands { lhs: String, rhs: String },

    #[error("ODE is not in normal form (a0 = {a0}, b0 = {b0})")]
    NotNormalForm { a0: String, b0: String },

    #[error("degenerate parameters: {0} vanishes")]
    DegenerateParameter(String),

    #[error("ODE is not in the solvable family {0}")]
    NotInFamily(String),

    #[error("eigenfunctions are not independent")]
    DependentEigenfunctions,

    #[error("reconstructed vector field is not quadratic: offending term {0}")]
    NotQuadratic(String),

    #[error("reconstructed coefficient {0} is not rational")]
    NonRationalCoefficient(String),

    #[error("eigenfunction denominator vanishes at ({x}, {y})")]
    Pole { x: f64, y: f64 },

    #[error("trajectory hits an eigenfunction pole at t = {0}")]
    PoleAtTime(f64),

    #[error("numerical integration failed at t = {0}")]
    IntegrationFailed(f64),

    #[error("state inversion is singular (eigenfunction coordinates do not determine (x, y))")]
    InversionSingularity,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
