use thiserror::Error;

/// Failures raised by the algebraic layer.
///
/// Variants that carry a `witness` describe the first basis element (or
/// degree) where a structural check broke, so callers can report it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NotAField(u64),
    #[error("no primitive {n}-th root of unity in F_{p}: {n} does not divide p-1")]
    NoPrimitiveRoot { n: usize, p: u64 },
    #[error("designated root is not a primitive {n}-th root of unity: {detail}")]
    BadRoot { n: usize, detail: String },
    #[error("N must be at least 2, got {0}")]
    BadOrder(usize),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("boundary subspace is not contained in the cycle subspace")]
    NotContained,
    #[error("composite of N consecutive differentials starting at degree {degree} is nonzero")]
    NotNDifferential { degree: i64 },
    #[error("map does not commute with the differentials (degree {degree})")]
    NotChainMap { degree: i64 },
    #[error("complex is not acyclic: H^{degree}_(1) has dimension {dim}")]
    NotAcyclic { degree: i64, dim: usize },
    #[error("not a triangle: {0}")]
    NotATriangle(String),
    #[error("q-Leibniz rule fails: {witness}")]
    LeibnizViolation { witness: String },
    #[error("associativity fails: {witness}")]
    AssocViolation { witness: String },
    #[error("unit law fails: {witness}")]
    UnitViolation { witness: String },
    #[error("action is not homogeneous: {witness}")]
    DegreeViolation { witness: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("{0}")]
    WrongSide(String),
    #[error("base categories do not match")]
    BaseMismatch,
    #[error("{name}: {inner}")]
    Invalid { name: String, inner: Box<Error> },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
