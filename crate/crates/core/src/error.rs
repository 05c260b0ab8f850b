use thiserror::Error;

use crate::complexfn::ComplexValue;

/// Every failure mode of the library. The CLI maps these onto exit codes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole at s=1")]
    PoleAtOne,
    #[error("|t| = {t} exceeds the working range {limit}")]
    RangeExceeded { t: f64, limit: f64 },
    #[error("Gamma has a pole at the nonpositive integer {0}")]
    PoleAtNonpositiveInteger(f64),
    #[error("Delta has a pole at the odd positive integer {0}")]
    PoleAtOddInteger(f64),
    #[error("argument {0} is too close to a pole or zero of Delta")]
    NearSingularity(ComplexValue),
    #[error("non-finite value produced at s = {0}")]
    NonFinite(ComplexValue),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid search window: {0}")]
    InvalidWindow(String),
    #[error("|zeta(s) - a| = {value:.3e} at s = {at} is inside the boundary clearance; perturb the window")]
    BoundaryTooClose { at: ComplexValue, value: f64 },
    #[error("winding integral {value} is not within 0.25 of an integer")]
    NonIntegralWinding { value: f64 },
    #[error("Newton refinement failed near s = {0}")]
    RefinementDiverged(ComplexValue),
    #[error("found {found} a-points but the argument principle counts {counted} in {window}")]
    WindowCountMismatch {
        found: usize,
        counted: usize,
        window: String,
    },
    #[error("T = {t} is too small (needs T > {min})")]
    TooSmallT { t: f64, min: f64 },

    #[error("line {0}: not a positive decimal ordinate")]
    ParseError(usize),
    #[error("line {0}: ordinates must be strictly ascending")]
    NotAscending(usize),
    #[error("line {line}: |zeta(1/2+it)| = {residual:.3e} exceeds the ingest tolerance")]
    ResidualTooLarge { line: usize, residual: f64 },
    #[error("i/o error: {0}")]
    Io(String),

    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("leading coefficient is zero; the series has no Dirichlet inverse")]
    ZeroLeadingCoefficient,
    #[error("a = 1 is not supported here")]
    ACaseOne,
    #[error("a must be nonzero")]
    ACaseZero,
    #[error("order K = {k} is below log2(N) = {needed} for N = {n}")]
    InsufficientOrder { k: usize, n: usize, needed: usize },

    #[error("a-points only cover t <= {covered}, requested T = {requested}")]
    InsufficientPoints { covered: f64, requested: f64 },
    #[error("coefficient table has {have} entries, {need} needed")]
    InsufficientCoefficients { have: usize, need: usize },
    #[error("quadrature did not converge (last change {last_change:.3e})")]
    QuadratureNotConverged { last_change: f64 },
    #[error("series has {have} coefficients, {need} needed")]
    SeriesTooShort { have: usize, need: usize },
    #[error("sample point {0} is closer than 1/log(2+|t|) to an a-point")]
    SampleTooCloseToAPoint(ComplexValue),
    #[error("grid must be ascending with at least {min} entries")]
    InvalidGrid { min: usize },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
