use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("odd power of q^(1/2) evaluated at non-square q = {0}")]
    OddPowerAtNonSquare(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("torus elements live over different skew forms")]
    ContextMismatch,
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("division is not exact")]
    NonExactDivision,
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("incompatible pair: {0}")]
    Incompatible(String),
    #[error("quiver has an oriented cycle or loop")]
    CyclicQuiver,
    #[error("valuation is not symmetrizable: {0}")]
    NonSymmetrizable(String),
    #[error("unsupported species arrow: {0}")]
    UnsupportedValuation(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("module is not injective")]
    NotInjective,
    #[error("counts are not polynomial in q: {0}")]
    NonPolynomial(String),
    #[error("descriptor does not identify an iso class: {0}")]
    DescriptorAmbiguous(String),
    #[error("no rigid module of dimension {0:?} found")]
    NoRigidModule(Vec<usize>),
    #[error("missing Grassmannian data: {0}")]
    MissingGrData(String),
    #[error("element not in span: {0}")]
    NotInSpan(String),
    #[error("unsupported dimension vector {0:?}")]
    UnsupportedDimension(Vec<i64>),
    #[error("count is not an integer: {0}")]
    NonIntegerResult(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
