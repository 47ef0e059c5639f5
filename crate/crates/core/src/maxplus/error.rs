use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaxPlusError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("zero-delay part of the graph contains a cycle through node {node}")]
    CyclicZeroDelay { node: usize },
    #[error("graph has no cycle")]
    NoCycle,
    #[error("graph has a cycle of zero total duration through node {node}")]
    ZeroDurationCycle { node: usize },
    #[error("negative backshift degree {degree}")]
    NegativeDelay { degree: i64 },
    #[error("graph is not strongly connected ({components} strongly connected components)")]
    NotIrreducible { components: usize },
    #[error("periodic system needs at least one phase")]
    NoPhases,
}
