use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum NcdError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("loop on vertex {0}: edges must join distinct vertices")]
    LoopEdge(usize),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),
    #[error("non-positive weight {weight} on edge {{{u},{v}}}")]
    NonPositiveWeight { u: usize, v: usize, weight: f64 },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is neither Hermitian nor skew-Hermitian")]
    NotNormalForm,
    #[error("nonzero diagonal entry at index {0}")]
    NonZeroDiagonal(usize),
    #[error("entry ({0},{1}) is nonzero but {{{0},{1}}} is not a declared edge")]
    EntryOffEdgeSet(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("empty weight sequence")]
    EmptySequence,
    #[error("chain weights must be positive and finite, got {0}")]
    BadChainWeight(f64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("query vertices must differ")]
    EqualVertices,
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("perturbation edges must be pairwise vertex-disjoint")]
    EdgesNotDisjoint,
    #[error("induced-path enumeration exceeded cap of {0} paths")]
    EnumerationCapExceeded(usize),
    #[error("eigensolver failed to converge after {0} sweeps")]
    EigNoConvergence(usize),
}
