use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid Weyl index (n={n}, m={m}) for d={d}")]
    InvalidWeylIndex { n: i64, m: i64, d: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("vector has zero norm")]
    ZeroVector,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator {index} is not unitary (defect {defect:e})")]
    NotUnitary { index: usize, defect: f64 },

    #[error("derived states {first} and {second} are not orthogonal (|overlap| = {overlap:e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("base state is not maximally entangled")]
    NotMaximallyEntangled,

    #[error("state set is empty")]
    EmptySet,

    #[error("Weyl index (n={n}, m={m}) appears more than once")]
    RepeatedIndex { n: usize, m: usize },

    #[error("Weyl indices mix dimensions {first} and {second}")]
    MixedDimension { first: usize, second: usize },

    #[error("witness basis incomplete: found {found} of {needed} vectors")]
    IncompleteBasis { found: usize, needed: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
