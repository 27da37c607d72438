use thiserror::Error;

use crate::linalg::Vector;
use crate::scalar::PiScalar;

/// Everything that can go wrong while building inputs or evaluating a formula.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("cannot add {lhs} and {rhs}: different powers of pi")]
    MixedPiPowers { lhs: PiScalar, rhs: PiScalar },

    #[error("division by zero in exact scalar arithmetic")]
    DivisionByZero,

    #[error("sample vector {v} hits a pole: {reason}")]
    PoleAtSample { v: Vector, reason: String },

    #[error(
        "localized sum depends on the sample: {first} at {first_v} but {second} at {second_v}"
    )]
    InconsistentSamples {
        first: PiScalar,
        first_v: Vector,
        second: PiScalar,
        second_v: Vector,
    },

    #[error("gave up after {draws} pole draws while collecting samples")]
    AllSamplesPoles { draws: usize },

    #[error("need at least {required} samples, got {requested}")]
    TooFewSamples { requested: usize, required: usize },

    #[error("invalid orbit system: {0}")]
    InvalidOrbitSystem(String),

    #[error("normal {index} is not a primitive lattice vector")]
    NonPrimitiveNormal { index: usize },

    #[error(
        "goodness violated at vertex with facets {facets:?}: elementary divisors {divisors:?}"
    )]
    GoodnessViolation {
        facets: Vec<usize>,
        divisors: Vec<String>,
    },

    #[error("vertex {vertex} lies on {active} facets; only simple sections are supported")]
    NotSimpleVertex { vertex: String, active: usize },

    #[error("hyperplane section is unbounded or empty: {0}")]
    UnboundedSection(String),

    #[error("linear functional is constant along an edge at vertex {vertex}")]
    EdgeConstantFunctional { vertex: String },

    #[error("deformed Reeb vector projects to zero under Weyl representative {index}")]
    DegenerateReeb { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed JSON: {0}")]
    Schema(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::SingularMatrix => "SingularMatrix",
            Error::MixedPiPowers { .. } => "MixedPiPowers",
            Error::DivisionByZero => "DivisionByZero",
            Error::PoleAtSample { .. } => "PoleAtSample",
            Error::InconsistentSamples { .. } => "InconsistentSamples",
            Error::AllSamplesPoles { .. } => "AllSamplesPoles",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::InvalidOrbitSystem(_) => "InvalidOrbitSystem",
            Error::NonPrimitiveNormal { .. } => "NonPrimitiveNormal",
            Error::GoodnessViolation { .. } => "GoodnessViolation",
            Error::NotSimpleVertex { .. } => "NotSimpleVertex",
            Error::UnboundedSection(_) => "UnboundedSection",
            Error::EdgeConstantFunctional { .. } => "EdgeConstantFunctional",
            Error::DegenerateReeb { .. } => "DegenerateReeb",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Schema(_) => "SchemaViolation",
        }
    }

    pub(crate) fn pole(v: &Vector, reason: impl Into<String>) -> Self {
        Error::PoleAtSample {
            v: v.clone(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Parses `text` as `R`, then validates it into `T`. Malformed JSON becomes
/// [`Error::Schema`]; validation errors keep their own kind.
pub(crate) fn from_json<R, T>(text: &str) -> Result<T>
where
    R: serde::de::DeserializeOwned,
    T: TryFrom<R, Error = Error>,
{
    let raw: R = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    T::try_from(raw)
}
