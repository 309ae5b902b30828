use thiserror::Error;

/// Problems reading the interchange format or scalar text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("not a rational number: {0:?}")]
    Rational(String),
    #[error("json: {0}")]
    Json(String),
    #[error("expected kind {expected:?}, found {found:?}")]
    Kind { expected: String, found: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("palette mismatch")]
    PaletteMismatch,
    #[error("unknown color {0:?}")]
    UnknownColor(String),
    #[error("invalid palette: {0}")]
    InvalidPalette(String),
    #[error("empty profile")]
    EmptyProfile,
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("profile mismatch: {left} vs {right}")]
    ProfileMismatch { left: String, right: String },
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("unsolvable: {0}")]
    Unsolvable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("operad: {0}")]
    Operad(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub type Result<T> = std::result::Result<T, Error>;
