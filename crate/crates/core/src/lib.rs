//! Sequential discrimination of unitary operations.
//!
//! Given two different unitaries `U` and `V` on a d-dimensional system, a
//! sequential scheme runs the unknown device N times on a single qudit,
//! inserting fixed "interleaver" unitaries between runs, and ends with a
//! projective measurement that tells the two hypotheses apart with zero
//! error. No entanglement or joint operations are involved. This crate
//! synthesizes such schemes from the spectral arc of `U†V`, plans the
//! parallel/mixed-scheme alternatives, simulates protocol executions with
//! seeded shot sampling, and numerically corroborates the optimality bounds
//! that make N = ⌈π/Θ(U†V)⌉ minimal.
//!
//! The crate is organized around:
//!
//! - [`matrix`], [`state`], [`unitary`], [`spectral`]: dense complex linear
//!   algebra at small dimension, unitarity certification, and eigenphase
//!   extraction for unitary (normal) matrices.
//! - [`arc`]: minimal covering arcs of eigenphase multisets on the unit
//!   circle (the Θ function), run-count arithmetic, and zero-in-hull
//!   certificates.
//! - [`synthesis`]: construction of the interleavers, input state, and
//!   measurement achieving perfect discrimination in N runs.
//! - [`schemes`]: partition planning for mixed parallel/sequential schemes
//!   and the spatial/temporal resource tradeoff.
//! - [`simulator`] and [`pauli`]: protocol execution against a hypothesis,
//!   seeded shot sampling, the n-candidate elimination tournament, and the
//!   generalized-Pauli two-run identification demo.
//! - [`verify`]: property sweeps for arc subadditivity, the k-run
//!   no-go bound, and the qubit trace criterion.
//!
//! All randomized entry points take explicit seeds and derive one RNG
//! stream per work item, so results are identical whether the `parallel`
//! feature (rayon) is enabled or not.

pub mod arc;
pub mod consts;
pub mod error;
pub mod exec;
pub mod haar;
pub mod json;
pub mod matrix;
pub mod measurement;
pub mod pauli;
pub mod schemes;
pub mod simulator;
pub mod spectral;
pub mod state;
pub mod synthesis;
pub mod unitary;
pub mod verify;

pub use arc::{minimal_covering_arc, min_runs, theta, theta_tensor_power, zero_hull_weights};
pub use arc::{Arc, HullCertificate, PhaseMultiset};
pub use error::{Error, Result};
pub use matrix::ComplexSquareMatrix;
pub use measurement::ProjectiveMeasurement;
pub use pauli::{
    pauli_matrix, pauli_one_run_impossible, pauli_two_run_protocol, PauliTwoRunProtocol,
};
pub use schemes::{plan_mixed, resource_report, validate_plan, PartitionPlan, ResourceReport};
pub use simulator::{eliminate_tournament, run_protocol, ShotRecord, TournamentTranscript};
pub use spectral::{spectral_decompose, SpectralDecomposition};
pub use state::{fourier_state, StateVector};
pub use synthesis::{
    build_measurement, claim_synthesize, rotation_angle, split_state, synthesize_protocol,
    SequentialProtocol,
};
pub use unitary::{certify_unitary, UnitaryOperator};
pub use verify::{
    chain_theta, check_subadditivity, optimality_search, qubit_one_run_criterion,
    OptimalityReport, QubitCriterion, SearchConfig,
};
