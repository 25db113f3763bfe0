//! Error type shared by every module in the crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Validation and domain errors.
///
/// All variants carry enough context to name the offending quantity in a
/// diagnostic; the CLI forwards these messages verbatim.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar parameter violated its domain constraint.
    #[error("{name} must be {constraint}, got {value}")]
    Param {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// Stopping threshold outside `1..=n`.
    #[error("stopping threshold k = {k} must satisfy 1 <= k <= n = {n}")]
    Threshold { k: u32, n: u32 },

    /// Harmonic numbers are defined here for positive index only.
    #[error("harmonic number is undefined for n = 0")]
    ZeroHarmonicIndex,

    /// A network needs at least one hop.
    #[error("network must contain at least one hop")]
    EmptyNetwork,

    /// Paired per-hop inputs of different lengths.
    #[error("hop count mismatch: {left} {left_what} vs {right} {right_what}")]
    HopCountMismatch {
        left: usize,
        left_what: &'static str,
        right: usize,
        right_what: &'static str,
    },

    /// Simulation configuration rejected before any event is processed.
    #[error("simulation config: {0}")]
    SimConfig(String),

    /// Full-tree simulation refuses to allocate beyond this many nodes.
    #[error("full-tree node count {nodes} exceeds the supported limit {limit}")]
    TreeTooLarge { nodes: u64, limit: u64 },
}
