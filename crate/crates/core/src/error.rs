use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent p = {0} must be at least 1")]
    ExponentBelowOne(f64),
    #[error("exponent p = {0} must exceed 2")]
    ExponentNotAboveTwo(f64),
    #[error("grid size {0} must be even and at least 2")]
    InvalidGridSize(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("level sets are not strictly nested at level {0}")]
    NonNestedSets(usize),
    #[error("levels must be positive and strictly decreasing")]
    InvalidLevels,
    #[error("sequence has support at negative index {0}")]
    NegativeSupport(i64),
    #[error("weight is not nondecreasing at n = {0}")]
    NonMonotoneWeight(usize),
    #[error("weight vanishes at n = {0}")]
    ZeroWeight(usize),
    #[error("weight entry {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },
    #[error("graph edge {0:?} is invalid: {1}")]
    InvalidEdge((usize, usize), &'static str),
    #[error("discarded imaginary part {residue:e} exceeds bound {bound:e}")]
    ImaginaryResidue { residue: f64, bound: f64 },
    #[error("Parseval residual {residual:e} exceeds tail tolerance {tolerance:e}")]
    TailResidual { residual: f64, tolerance: f64 },
    #[error("symbol is not radial nondecreasing on the grid (node {0})")]
    SymbolNotRadialIncreasing(usize),
    #[error("degenerate quantity: {0}")]
    Degenerate(&'static str),
    #[error("alpha = {0} outside (1, 2]")]
    AlphaOutOfRange(f64),
    #[error("|u(0)| = {origin} is not the maximum of |u| ({max})")]
    MaxNotAtOrigin { origin: f64, max: f64 },
    #[error("moment exponent {0} must exceed -1")]
    NonIntegrableExponent(f64),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("invalid generator bounds: {0}")]
    InvalidGeneratorBounds(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
