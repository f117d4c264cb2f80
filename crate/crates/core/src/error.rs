use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus in [2, 2^31)")]
    NotPrime(u64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fields differ: GF({left}) vs GF({right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("structure constant index out of range: ({i}, {j}, {k}) in dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },

    #[error("duplicate structure constant entry for e{i}·e{j} at coordinate {k}")]
    DuplicateEntry { i: usize, j: usize, k: usize },

    #[error("subspace is not a two-sided ideal: {0}")]
    NotAnIdeal(String),

    #[error("subspace is not a subalgebra: {0}")]
    NotASubalgebra(String),

    #[error("word syntax error at byte {position}: {message}")]
    WordSyntax { position: usize, message: String },

    #[error("word is not multilinear: {0}")]
    NotMultilinear(String),

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("matrix is not {dim}x{dim}")]
    MatrixShape { dim: usize },

    #[error("map is not multiplicative on basis pair (e{i}, e{j})")]
    NotMultiplicative { i: usize, j: usize },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("morphism set must consist of automorphisms")]
    NotAutomorphisms,

    #[error("morphism closure exceeded cap {cap} (reached {reached} elements)")]
    MorphismCap { cap: usize, reached: usize },

    #[error("sublattice closure exceeded cap {cap} (reached {reached} elements)")]
    ClosureCap { cap: usize, reached: usize },

    #[error("operation requires a complete sublattice closure")]
    IncompleteClosure,

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("empty existential pool")]
    EmptyPool,

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("theorem violation (implementation defect): {0}")]
    TheoremViolation(String),

    #[error("search routes disagree: {0}")]
    RouteDisagreement(String),

    #[error("no qualifying element found: {0}")]
    NotFound(String),
}
