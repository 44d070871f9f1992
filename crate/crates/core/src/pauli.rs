//! Generalized Pauli (shift/clock) operators and the two-run
//! identification of all d² of them without entanglement.
//!
//! σ_mn = Σ_k ω^{nk}|k+m⟩⟨k| with ω = e^{2πi/d}. On the product input
//! |0⟩⊗|0̄⟩ the doubled operator acts as
//! (σ_mn ⊗ σ_mn)|0 0̄⟩ = ω^{−mn}|m n̄⟩, so reading qudit 1 in the
//! computational basis and qudit 2 in the Fourier basis recovers (m, n)
//! with certainty: two runs identify d² candidates, while a single run
//! cannot since C^d has no d² orthogonal states.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{indexed_map, stream_rng};
use crate::haar::random_state;
use crate::matrix::ComplexSquareMatrix;
use crate::measurement::{rank_one_projector, ProjectiveMeasurement};
use crate::state::{fourier_state, StateVector};
use crate::unitary::{certify_unitary, UnitaryOperator};

/// σ_mn: entry ω^{nk} at (row k+m mod d, column k).
pub fn pauli_matrix(dim: usize, m: usize, n: usize) -> Result<UnitaryOperator> {
    if m >= dim {
        return Err(Error::IndexOutOfRange { index: m, dim });
    }
    if n >= dim {
        return Err(Error::IndexOutOfRange { index: n, dim });
    }
    let mut mat = ComplexSquareMatrix::zeros(dim);
    for k in 0..dim {
        let row = (k + m) % dim;
        mat.set(row, k, Complex64::from_polar(1.0, TAU * (n * k) as f64 / dim as f64));
    }
    certify_unitary(mat, 1e-12)
}

/// The two-run identification scheme: product input |0⟩⊗|0̄⟩ on C^{d²}
/// and the d²-outcome measurement {|m⟩⟨m| ⊗ |n̄⟩⟨n̄|}.
#[derive(Debug, Clone)]
pub struct PauliTwoRunProtocol {
    dim: usize,
    input: StateVector,
    measurement: ProjectiveMeasurement,
}

impl PauliTwoRunProtocol {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The (unentangled) input state on C^{d²}.
    pub fn input(&self) -> &StateVector {
        &self.input
    }

    /// Computational ⊗ Fourier basis measurement; labels are "m,n".
    pub fn measurement(&self) -> &ProjectiveMeasurement {
        &self.measurement
    }

    /// Output state (σ_mn ⊗ σ_mn)|0 0̄⟩ for a given truth.
    pub fn output_for(&self, m: usize, n: usize) -> Result<StateVector> {
        let sigma = pauli_matrix(self.dim, m, n)?;
        let doubled = sigma.tensor(&sigma)?;
        doubled.apply(&self.input)
    }

    /// Reads out (m, n) for the given truth; the winning outcome carries
    /// probability 1 up to rounding.
    pub fn readout(&self, m: usize, n: usize) -> Result<(usize, usize)> {
        let probs = self.measurement.probabilities(&self.output_for(m, n)?)?;
        let (best, &p) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite probabilities"))
            .expect("nonempty measurement");
        if p < 1.0 - 1e-9 {
            return Err(Error::NumericalFailure(format!(
                "readout probability {p} below certainty for ({m},{n})"
            )));
        }
        Ok((best / self.dim, best % self.dim))
    }
}

/// Builds the two-run identification scheme for dimension `d ≥ 2`.
pub fn pauli_two_run_protocol(dim: usize) -> Result<PauliTwoRunProtocol> {
    if dim < 2 {
        return Err(Error::PreconditionViolation(
            "pauli identification needs d >= 2".into(),
        ));
    }
    let input = StateVector::basis(dim, 0)?.tensor(&fourier_state(dim, 0)?);
    let mut projectors = Vec::with_capacity(dim * dim);
    let mut labels = Vec::with_capacity(dim * dim);
    for m in 0..dim {
        let pm = rank_one_projector(&StateVector::basis(dim, m)?);
        for n in 0..dim {
            let pn = rank_one_projector(&fourier_state(dim, n)?);
            projectors.push(pm.tensor(&pn));
            labels.push(format!("{m},{n}"));
        }
    }
    let measurement = ProjectiveMeasurement::new(projectors, labels)?;
    Ok(PauliTwoRunProtocol {
        dim,
        input,
        measurement,
    })
}

/// Defect of the displayed phase identity:
/// ‖(σ_mn⊗σ_mn)|0 0̄⟩ − ω^{−mn}|m⟩⊗|n̄⟩‖.
pub fn pauli_phase_identity_defect(dim: usize, m: usize, n: usize) -> Result<f64> {
    let protocol = pauli_two_run_protocol(dim)?;
    let out = protocol.output_for(m, n)?;
    let expected = StateVector::basis(dim, m)?.tensor(&fourier_state(dim, n)?);
    let phase = Complex64::from_polar(1.0, -TAU * (m * n) as f64 / dim as f64);
    let defect: f64 = out
        .amplitudes()
        .iter()
        .zip(expected.amplitudes())
        .map(|(got, want)| (got - phase * want).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(defect)
}

/// Confirms that no single-run input distinguishes all d² operators: for
/// every sampled ψ, some pair (σψ, σ'ψ) stays non-orthogonal. Trivially
/// true by counting (d² orthogonal states cannot fit in C^d) but checked
/// numerically here.
pub fn pauli_one_run_impossible(dim: usize, trials: usize, seed: u64) -> Result<bool> {
    if dim < 2 {
        return Err(Error::PreconditionViolation(
            "pauli identification needs d >= 2".into(),
        ));
    }
    let mut sigmas = Vec::with_capacity(dim * dim);
    for m in 0..dim {
        for n in 0..dim {
            sigmas.push(pauli_matrix(dim, m, n)?);
        }
    }
    let confirmations = indexed_map(trials, |t| {
        let psi = random_state(dim, &mut stream_rng(seed, t as u64));
        let images: Vec<StateVector> = sigmas
            .iter()
            .map(|s| s.apply(&psi).expect("dimension fixed"))
            .collect();
        images.iter().enumerate().any(|(i, a)| {
            images[i + 1..]
                .iter()
                .any(|b| a.inner(b).expect("same dim").norm() > 1e-6)
        })
    });
    Ok(confirmations.into_iter().all(|c| c))
}
