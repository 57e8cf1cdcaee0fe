use thiserror::Error;

/// Errors raised by series arithmetic, classification, solving and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible series: {0}")]
    IncompatibleSeries(String),

    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("exponential needs a series with strictly positive powers, found base {0}")]
    NonPositiveLeadingPower(f64),

    #[error("point {x} is outside the domain x > {x0}")]
    Domain { x: f64, x0: f64 },

    #[error("indicial roots are complex (discriminant {0:e})")]
    ComplexRoots(f64),

    #[error("recurrence denominator vanishes at k = {0}")]
    Resonance(usize),

    #[error("majorant radius must be positive, got {0}")]
    InvalidRadius(f64),

    #[error("Wronskian at the reference point is {0:e}; solutions are dependent")]
    DegenerateWronskian(f64),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
