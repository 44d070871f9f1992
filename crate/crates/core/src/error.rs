//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of construction, synthesis, and verification.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// `‖M†M − I‖_F` exceeded the certification tolerance.
    #[error("matrix is not unitary: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { defect: f64, tol: f64 },

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A basis or candidate index is outside `0..dim`.
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    /// A phase multiset or candidate list was empty.
    #[error("empty input")]
    EmptyInput,

    /// An entry was NaN or infinite.
    #[error("non-finite entry in input")]
    NonFinite,

    /// A vector's 2-norm was too far from 1.
    #[error("normalization defect {0:.3e} exceeds tolerance")]
    NotNormalized(f64),

    /// The two operators agree up to a global phase; perfect
    /// discrimination is impossible.
    #[error("operators are equal up to a global phase (arc width {width:.3e})")]
    NotDifferent { width: f64 },

    /// Zero is outside the convex hull of the spectrum; no input state has
    /// vanishing expectation.
    #[error("no zero-in-hull certificate: arc width {width:.9} is below pi")]
    NoCertificate { width: f64 },

    /// A combinatorial enumeration would exceed the configured guard.
    #[error("enumeration of {size} combinations exceeds guard {guard}")]
    TooLarge { size: u128, guard: u128 },

    /// A caller-facing precondition failed beyond tolerance.
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// The synthesized branches stayed non-orthogonal even after the
    /// one-step run-count bump.
    #[error("orthogonality failure: overlap {overlap:.3e} exceeds {tol:.3e}")]
    OrthogonalityFailure { overlap: f64, tol: f64 },

    /// Partition request with m < 1 or m > N.
    #[error("invalid partition request: m={copies} of N={total}")]
    InvalidPartitionRequest { copies: usize, total: usize },

    /// Subadditivity was queried outside its hypothesis Θ(U)+Θ(V) < π.
    #[error("hypothesis violated: theta(U)+theta(V) = {sum:.9} >= pi")]
    HypothesisViolation { sum: f64 },

    /// An iterative numerical routine failed to converge or a certified
    /// postcondition check failed.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}
