//! Default tolerances shared across the crate.
//!
//! Two tiers are used throughout: tight tolerances for algebraic identities
//! that only see rounding error, and looser ones for quantities that pass
//! through an eigensolver or a numerical search.

/// Unitarity certification: Frobenius norm of `M†M − I`.
pub const UNITARY_TOL: f64 = 1e-9;

/// Unitarity tolerance for operators built as products of certified ones.
pub const COMPOSED_UNITARY_TOL: f64 = 1e-8;

/// State normalization: allowed deviation of the 2-norm from 1.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// Spectral reconstruction defect `‖Σ e^{iθ}|v⟩⟨v| − U‖_F`.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Gram-matrix deviation from identity for orthonormal frames.
pub const GRAM_TOL: f64 = 1e-10;

/// Arc width below which two unitaries count as equal up to global phase,
/// and circular distance below which eigenphases merge into one cluster.
pub const PHASE_TOL: f64 = 1e-8;

/// Residual modulus for a zero-in-hull certificate.
pub const HULL_RESIDUAL_TOL: f64 = 1e-10;

/// Branch-overlap modulus accepted when certifying a protocol.
pub const ORTH_TOL: f64 = 1e-7;

/// Overlap bound enforced on the internal synthesized-state check.
pub const INTERNAL_ORTH_TOL: f64 = 1e-9;

/// Slack subtracted inside the ceiling when computing run counts, so a
/// width that lands a hair under an exact divisor of π does not inflate N.
pub const CEILING_GUARD: f64 = 1e-9;

/// Combination-count cap for combinatorial phase-sum enumeration.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

/// Tolerance on the run-count bracketing inequality (N−1)θ < π ≤ Nθ.
pub const BRACKET_TOL: f64 = 1e-6;

/// Tolerance for assertions that depend on a numerical search.
pub const SEARCH_TOL: f64 = 1e-6;
