use thiserror::Error;

/// Structural problems found while validating a [`CodeSpec`](crate::CodeSpec).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("children are not strictly nested: {0}")]
    NotNested(String),
    #[error("m = {m} is not smaller than the field size q = {q}")]
    MTooLargeForField { m: usize, q: usize },
    #[error("alpha has order {order}, but {needed} distinct evaluation points are required")]
    AlphaOrderTooSmall { needed: usize, order: usize },
    #[error("multiplicity s[{index}] = {value} is negative")]
    NegativeMultiplicity { index: usize, value: i64 },
    #[error("node has {children} children but {s} multiplicities (expected children + 1)")]
    MultiplicityCount { children: usize, s: usize },
    #[error("node has no children")]
    EmptyNode,
    #[error("node multiplicities sum to zero")]
    EmptyInterleave,
    #[error("children do not share one structure: {0}")]
    MismatchedChildren(String),
    #[error("leaf redundancy u = {u} exceeds the row length n = {n}")]
    RedundancyTooLarge { n: usize, u: usize },
    #[error("leaf row length must be at least 1")]
    EmptyLeaf,
    #[error("unsupported field GF(2^{0}); w must lie in 2..=8")]
    UnsupportedField(u32),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in GF(2^w)")]
    DivisionByZero,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrices live over different fields")]
    ContextMismatch,
    #[error("the known symbols are inconsistent with every codeword")]
    InconsistentWord,
    #[error("invalid code spec: {0}")]
    Validation(#[from] ValidationError),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("codes do not share the same nested children")]
    DifferentChildren,
    #[error("sibling capabilities cannot be arranged into a nested chain: {0}")]
    NotTotallyOrdered(String),
    #[error("the code has dimension 0 and no nonzero codewords")]
    NoCodewords,
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
