//! Synthesis of sequential discrimination protocols.
//!
//! Given different unitaries U, V with w = Θ(U†V), a protocol with
//! N = ⌈π/w⌉ runs is built from a 2×2 real rotation: working in the
//! eigenbasis of W = U†V, rotate the spectrum so its minimal arc starts at
//! phase 0, take the eigenvectors at the arc endpoints (phases 0 and w),
//! and embed the rotation by [`rotation_angle`] into their span, acting as
//! the identity elsewhere. The rotated chain X†WXW^{N−1} then has trace
//! zero on that 2×2 block, hence an antipodal eigenvalue pair, and the
//! equal superposition of the antipodal eigenvectors is an input state on
//! which the chain has zero expectation. Unrolling the chain gives the
//! interleavers: X₁ = … = X_{N−2} = U† and X_{N−1} = X·U†.
//!
//! Each synthesized protocol stores its branch outputs and certified
//! overlap, so it can be re-verified after a round trip through JSON.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arc::{min_runs_from_width, minimal_covering_arc, zero_hull_weights, PhaseMultiset};
use crate::consts::{
    BRACKET_TOL, COMPOSED_UNITARY_TOL, INTERNAL_ORTH_TOL, ORTH_TOL, PHASE_TOL,
};
use crate::error::{Error, Result};
use crate::matrix::ComplexSquareMatrix;
use crate::measurement::{rank_one_projector, ProjectiveMeasurement};
use crate::spectral::spectral_decompose;
use crate::state::StateVector;
use crate::unitary::{certify_unitary, UnitaryOperator};

/// Protocols larger than this are refused outright; they would only arise
/// from near-identical operator pairs that are better reported as such.
pub const MAX_PROTOCOL_RUNS: usize = 4096;

/// A certified N-run discrimination protocol for a candidate pair.
#[derive(Debug, Clone)]
pub struct SequentialProtocol {
    dim: usize,
    num_runs: usize,
    input_state: StateVector,
    interleavers: Vec<UnitaryOperator>,
    branch_u_output: StateVector,
    branch_v_output: StateVector,
    candidate_u: UnitaryOperator,
    candidate_v: UnitaryOperator,
    orth_defect: f64,
    bumped: bool,
}

impl SequentialProtocol {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_runs(&self) -> usize {
        self.num_runs
    }

    pub fn input_state(&self) -> &StateVector {
        &self.input_state
    }

    pub fn interleavers(&self) -> &[UnitaryOperator] {
        &self.interleavers
    }

    pub fn branch_u_output(&self) -> &StateVector {
        &self.branch_u_output
    }

    pub fn branch_v_output(&self) -> &StateVector {
        &self.branch_v_output
    }

    pub fn candidate_u(&self) -> &UnitaryOperator {
        &self.candidate_u
    }

    pub fn candidate_v(&self) -> &UnitaryOperator {
        &self.candidate_v
    }

    /// Measured |⟨ψ_U|ψ_V⟩| at certification time.
    pub fn orth_defect(&self) -> f64 {
        self.orth_defect
    }

    /// Whether the run count had to be raised once past the ceiling.
    pub fn bumped(&self) -> bool {
        self.bumped
    }

    /// Runs the protocol chain truth·X_{N−1}·truth·…·X₁·truth on the
    /// input state.
    pub fn run_chain(&self, truth: &UnitaryOperator) -> Result<StateVector> {
        if truth.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: truth.dim(),
                right: self.dim,
            });
        }
        let mut out = truth.apply(&self.input_state)?;
        for x in &self.interleavers {
            out = truth.apply(&x.apply(&out)?)?;
        }
        Ok(out)
    }

    /// Re-derives both branch outputs from the raw fields and checks them
    /// against the stored ones and against the overlap bound. Used after
    /// deserialization.
    pub fn verify(&self) -> Result<()> {
        if self.interleavers.len() + 1 != self.num_runs {
            return Err(Error::NumericalFailure(format!(
                "{} interleavers inconsistent with {} runs",
                self.interleavers.len(),
                self.num_runs
            )));
        }
        let u_out = self.run_chain(&self.candidate_u)?;
        let v_out = self.run_chain(&self.candidate_v)?;
        for (stored, fresh) in [(&self.branch_u_output, &u_out), (&self.branch_v_output, &v_out)]
        {
            let dist: f64 = stored
                .amplitudes()
                .iter()
                .zip(fresh.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if dist > 1e-9 {
                return Err(Error::NumericalFailure(format!(
                    "stored branch output drifts from recomputation by {dist:.3e}"
                )));
            }
        }
        let overlap = u_out.inner(&v_out)?.norm();
        if overlap > ORTH_TOL {
            return Err(Error::OrthogonalityFailure {
                overlap,
                tol: ORTH_TOL,
            });
        }
        Ok(())
    }

    /// Reassembles a protocol from parts, re-running the verification.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        num_runs: usize,
        input_state: StateVector,
        interleavers: Vec<UnitaryOperator>,
        branch_u_output: StateVector,
        branch_v_output: StateVector,
        candidate_u: UnitaryOperator,
        candidate_v: UnitaryOperator,
        orth_defect: f64,
        bumped: bool,
    ) -> Result<Self> {
        let protocol = Self {
            dim: candidate_u.dim(),
            num_runs,
            input_state,
            interleavers,
            branch_u_output,
            branch_v_output,
            candidate_u,
            candidate_v,
            orth_defect,
            bumped,
        };
        protocol.verify()?;
        Ok(protocol)
    }
}

/// The antipodal spectral pair of a trace-free-style unitary:
/// M = e^{iβ}|ψ₊⟩⟨ψ₊| − e^{iβ}|ψ₋⟩⟨ψ₋| (⊕ rest).
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub phase_beta: f64,
    pub plus_vector: StateVector,
    pub minus_vector: StateVector,
}

/// Extracts an antipodal eigenvalue pair (phases β and β+π) from the
/// spectrum of `m`.
pub fn spectral_split(m: &UnitaryOperator) -> Result<SpectralSplit> {
    let dec = spectral_decompose(m)?;
    let phases = dec.phases();
    for i in 0..phases.len() {
        for j in 0..phases.len() {
            if i == j {
                continue;
            }
            if crate::arc::circular_distance(phases[j], phases[i] + PI) <= 1e-6 {
                return Ok(SpectralSplit {
                    phase_beta: phases[i],
                    plus_vector: dec.frame()[i].clone(),
                    minus_vector: dec.frame()[j].clone(),
                });
            }
        }
    }
    Err(Error::NumericalFailure(
        "no antipodal eigenvalue pair in spectrum".into(),
    ))
}

/// Rotation angle α = tan⁻¹ √(−cos(Nθ/2)/cos((N−2)θ/2)) for the 2×2
/// construction, valid on the bracket (N−1)θ < π ≤ Nθ.
pub fn rotation_angle(theta: f64, num_runs: usize) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::PreconditionViolation(format!(
            "theta {theta} outside (0, pi)"
        )));
    }
    let n = num_runs as f64;
    if !((n - 1.0) * theta < PI + BRACKET_TOL && PI <= n * theta + BRACKET_TOL) {
        return Err(Error::PreconditionViolation(format!(
            "bracket (N-1)θ < π ≤ Nθ fails for θ={theta}, N={num_runs}"
        )));
    }
    let numerator = -(n * theta / 2.0).cos();
    let denominator = ((n - 2.0) * theta / 2.0).cos();
    if denominator <= 1e-12 {
        return Err(Error::PreconditionViolation(format!(
            "degenerate denominator cos((N-2)θ/2) = {denominator:.3e}"
        )));
    }
    let radicand = numerator / denominator;
    if radicand < -1e-12 {
        return Err(Error::PreconditionViolation(format!(
            "negative radicand {radicand:.3e}"
        )));
    }
    Ok(radicand.max(0.0).sqrt().atan())
}

/// Residual of the trace equation
/// cos²α·e^{iNθ} + sin²α·e^{i(N−1)θ} + sin²α·e^{iθ} + cos²α = 0.
pub fn trace_equation_residual(theta: f64, num_runs: usize, alpha: f64) -> f64 {
    let n = num_runs as f64;
    let c2 = alpha.cos().powi(2);
    let s2 = alpha.sin().powi(2);
    (Complex64::from_polar(c2, n * theta)
        + Complex64::from_polar(s2, (n - 1.0) * theta)
        + Complex64::from_polar(s2, theta)
        + Complex64::new(c2, 0.0))
    .norm()
}

/// Zero-expectation input state ψ = Σ_j √w_j |v_j⟩ built from a
/// zero-in-hull certificate over the spectrum of `m`.
pub fn split_state(m: &UnitaryOperator) -> Result<StateVector> {
    let dec = spectral_decompose(m)?;
    let multiset = PhaseMultiset::new(dec.phases().to_vec())?;
    let cert = zero_hull_weights(&multiset)?;
    let d = m.dim();
    let mut amplitudes = vec![Complex64::ZERO; d];
    for (&idx, &w) in cert.support.iter().zip(&cert.weights) {
        let v = dec.frame()[idx].amplitudes();
        let coeff = w.sqrt();
        for i in 0..d {
            amplitudes[i] += coeff * v[i];
        }
    }
    let psi = StateVector::normalized(amplitudes)?;
    let expectation = expectation_modulus(m, &psi)?;
    if expectation > INTERNAL_ORTH_TOL {
        return Err(Error::NumericalFailure(format!(
            "split state expectation {expectation:.3e} above bound"
        )));
    }
    Ok(psi)
}

fn expectation_modulus(m: &UnitaryOperator, psi: &StateVector) -> Result<f64> {
    Ok(psi.inner(&m.apply(psi)?)?.norm())
}

/// Outcome of the single-operator claim: X, ψ, and the run count such that
/// Xψ ⊥ WXW^{N−1}ψ.
#[derive(Debug, Clone)]
pub struct Claim {
    pub interleaver_core: UnitaryOperator,
    pub input: StateVector,
    pub num_runs: usize,
    pub bumped: bool,
}

/// Synthesizes (X, ψ, N) with |⟨ψ|X†WXW^{N−1}|ψ⟩| ≤ 1e−9 for a
/// nontrivial unitary `w`, discriminating it from the identity.
pub fn claim_synthesize(w: &UnitaryOperator) -> Result<Claim> {
    let width = crate::arc::theta(w)?;
    let n = min_runs_from_width(width)?;
    if n > MAX_PROTOCOL_RUNS {
        return Err(Error::TooLarge {
            size: n as u128,
            guard: MAX_PROTOCOL_RUNS as u128,
        });
    }
    match claim_with_runs(w, width, n) {
        Ok((x, psi)) => Ok(Claim {
            interleaver_core: x,
            input: psi,
            num_runs: n,
            bumped: false,
        }),
        // A ceiling-boundary width can leave N one too low; one bump is
        // always enough because (N+1)·width then clears π outright.
        Err(Error::NotDifferent { .. }) => Err(Error::NotDifferent { width }),
        Err(_) => {
            let (x, psi) = claim_with_runs(w, width, n + 1)?;
            Ok(Claim {
                interleaver_core: x,
                input: psi,
                num_runs: n + 1,
                bumped: true,
            })
        }
    }
}

fn claim_with_runs(
    w: &UnitaryOperator,
    width: f64,
    num_runs: usize,
) -> Result<(UnitaryOperator, StateVector)> {
    if width <= PHASE_TOL {
        return Err(Error::NotDifferent { width });
    }
    if num_runs == 1 {
        // Θ(W) already reaches π; no rotation needed.
        return Ok((UnitaryOperator::identity(w.dim()), split_state(w)?));
    }
    let dec = spectral_decompose(w)?;
    let multiset = PhaseMultiset::new(dec.phases().to_vec())?;
    let arc = minimal_covering_arc(&multiset);
    let lo = multiset.index_nearest(arc.start);
    let hi = multiset.index_nearest(arc.start + arc.width);
    if lo == hi {
        return Err(Error::NumericalFailure(
            "arc endpoints collapse to one eigenvector".into(),
        ));
    }
    let alpha = rotation_angle(arc.width, num_runs)?;
    let x = embed_rotation(w.dim(), alpha, dec.frame()[hi].clone(), dec.frame()[lo].clone())?;

    // Rotate the arc start to phase 0; only the modulus of the final
    // overlap matters, so the dropped global phase is irrelevant.
    let w_aligned = w.phase_shifted(-arc.start);
    let chain = chain_operator(&x, &w_aligned, num_runs)?;
    let psi = split_state(&chain)?;
    Ok((x, psi))
}

/// X†·W·X·W^{N−1} as a certified unitary.
fn chain_operator(
    x: &UnitaryOperator,
    w: &UnitaryOperator,
    num_runs: usize,
) -> Result<UnitaryOperator> {
    let power = matrix_power(w.matrix(), num_runs - 1)?;
    let m = x
        .matrix()
        .adjoint()
        .mul(w.matrix())?
        .mul(x.matrix())?
        .mul(&power)?;
    certify_unitary(m, COMPOSED_UNITARY_TOL)
}

fn matrix_power(m: &ComplexSquareMatrix, mut exp: usize) -> Result<ComplexSquareMatrix> {
    let mut result = ComplexSquareMatrix::identity(m.dim());
    let mut base = m.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = result.mul(&base)?;
        }
        exp >>= 1;
        if exp > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(result)
}

/// Embeds the real rotation by α into span{v_hi, v_lo}, identity on the
/// orthogonal complement: X v_hi = cos α v_hi + sin α v_lo,
/// X v_lo = −sin α v_hi + cos α v_lo.
fn embed_rotation(
    dim: usize,
    alpha: f64,
    v_hi: StateVector,
    v_lo: StateVector,
) -> Result<UnitaryOperator> {
    let c = alpha.cos();
    let s = alpha.sin();
    let mut m = ComplexSquareMatrix::identity(dim);
    let hi = v_hi.amplitudes();
    let lo = v_lo.amplitudes();
    for i in 0..dim {
        for j in 0..dim {
            let delta = (c - 1.0) * (hi[i] * hi[j].conj() + lo[i] * lo[j].conj())
                - s * hi[i] * lo[j].conj()
                + s * lo[i] * hi[j].conj();
            m.set(i, j, m.get(i, j) + delta);
        }
    }
    certify_unitary(m, COMPOSED_UNITARY_TOL)
}

/// Synthesizes the full protocol discriminating `u` from `v`.
pub fn synthesize_protocol(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
) -> Result<SequentialProtocol> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let w = u.adjoint().compose(v)?;
    let claim = claim_synthesize(&w)?;
    match assemble(u, v, &claim) {
        Ok(protocol) => Ok(protocol),
        Err(Error::OrthogonalityFailure { overlap, tol }) if !claim.bumped => {
            // one retry at N+1, then give up loudly
            let width = crate::arc::theta(&w)?;
            let (x, psi) = claim_with_runs(&w, width, claim.num_runs + 1)
                .map_err(|_| Error::OrthogonalityFailure { overlap, tol })?;
            let bumped = Claim {
                interleaver_core: x,
                input: psi,
                num_runs: claim.num_runs + 1,
                bumped: true,
            };
            assemble(u, v, &bumped)
        }
        Err(e) => Err(e),
    }
}

fn assemble(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
    claim: &Claim,
) -> Result<SequentialProtocol> {
    let n = claim.num_runs;
    let u_dag = u.adjoint();
    let mut interleavers = Vec::with_capacity(n.saturating_sub(1));
    if n >= 2 {
        for _ in 0..(n - 2) {
            interleavers.push(u_dag.clone());
        }
        interleavers.push(claim.interleaver_core.compose(&u_dag)?);
    }
    let mut protocol = SequentialProtocol {
        dim: u.dim(),
        num_runs: n,
        input_state: claim.input.clone(),
        interleavers,
        branch_u_output: claim.input.clone(), // placeholder, set below
        branch_v_output: claim.input.clone(),
        candidate_u: u.clone(),
        candidate_v: v.clone(),
        orth_defect: 0.0,
        bumped: claim.bumped,
    };
    let u_out = protocol.run_chain(u)?;
    let v_out = protocol.run_chain(v)?;
    let overlap = u_out.inner(&v_out)?.norm();
    if overlap > ORTH_TOL {
        return Err(Error::OrthogonalityFailure {
            overlap,
            tol: ORTH_TOL,
        });
    }
    protocol.branch_u_output = u_out;
    protocol.branch_v_output = v_out;
    protocol.orth_defect = overlap;
    Ok(protocol)
}

/// Three-outcome measurement {|ψ_U⟩⟨ψ_U|, |ψ_V'⟩⟨ψ_V'|, rest} for a
/// protocol, where ψ_V' is ψ_V orthonormalized against ψ_U so the
/// projector algebra is exact.
pub fn build_measurement(protocol: &SequentialProtocol) -> Result<ProjectiveMeasurement> {
    let psi_u = protocol.branch_u_output();
    let psi_v = protocol.branch_v_output();
    let overlap = psi_u.inner(psi_v)?;
    let mut perp: Vec<Complex64> = psi_v
        .amplitudes()
        .iter()
        .zip(psi_u.amplitudes())
        .map(|(v, u)| v - overlap * u)
        .collect();
    let norm = perp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut perp {
        *z /= norm;
    }
    let p_u = rank_one_projector(psi_u);
    let p_v = rank_one_projector(&StateVector::new(perp)?);
    let d = protocol.dim();
    let rest = ComplexSquareMatrix::identity(d).sub(&p_u.add(&p_v)?)?;
    ProjectiveMeasurement::new(
        vec![p_u, p_v, rest],
        vec!["U".into(), "V".into(), "rest".into()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::{min_runs, theta};
    use crate::exec::stream_rng;
    use crate::haar::{haar_unitary_seeded, haar_unitary_where};
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::TAU;

    fn diag(phases: &[f64]) -> UnitaryOperator {
        UnitaryOperator::from_phases(phases)
    }

    #[test]
    fn rotation_angle_vanishes_at_half_turn_multiples() {
        // cos(Nθ/2) = 0 at θ=π/2, N=2 and θ=π/3, N=3
        assert!(rotation_angle(PI / 2.0, 2).unwrap() <= 1e-9);
        assert!(rotation_angle(PI / 3.0, 3).unwrap() <= 1e-9);
        // tr(U²) = e^{iπ} + 1 = 0 for the first case
        assert!(trace_equation_residual(PI / 2.0, 2, 0.0) <= 1e-12);
        assert!(trace_equation_residual(PI / 3.0, 3, 0.0) <= 1e-12);
    }

    #[test]
    fn rotation_angle_known_value() {
        let alpha = rotation_angle(2.0 * PI / 3.0, 2).unwrap();
        assert!((alpha - 0.5_f64.sqrt().atan()).abs() <= 1e-12);
        assert!((alpha - 0.61548).abs() <= 1e-5);
        assert!(trace_equation_residual(2.0 * PI / 3.0, 2, alpha) <= 1e-12);
    }

    #[test]
    fn rotation_angle_rejects_bad_bracket() {
        assert!(matches!(
            rotation_angle(PI / 2.0, 5),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn trace_equation_holds_across_bracket() {
        for trial in 0..1000u64 {
            let mut rng = stream_rng(59, trial);
            let theta = rng.random_range(0.01..PI - 0.01);
            let n = (PI / theta).ceil() as usize;
            if !((n - 1) as f64 * theta < PI && PI <= n as f64 * theta) {
                continue;
            }
            let alpha = rotation_angle(theta, n).unwrap();
            let residual = trace_equation_residual(theta, n, alpha);
            assert!(
                residual <= 1e-9,
                "θ={theta} N={n} α={alpha}: residual {residual:.3e}"
            );
        }
    }

    #[test]
    fn split_state_on_antipodal_diagonal() {
        let m = diag(&[0.0, PI]);
        let psi = split_state(&m).unwrap();
        let s = 0.5_f64.sqrt();
        assert!((psi.amplitudes()[0].norm() - s).abs() <= 1e-12);
        assert!((psi.amplitudes()[1].norm() - s).abs() <= 1e-12);
        assert!(expectation_modulus(&m, &psi).unwrap() <= 1e-12);
    }

    #[test]
    fn split_state_on_symmetric_qutrit() {
        let m = diag(&[0.0, TAU / 3.0, 2.0 * TAU / 3.0]);
        let psi = split_state(&m).unwrap();
        assert!(expectation_modulus(&m, &psi).unwrap() <= 1e-12);
        for a in psi.amplitudes() {
            assert!((a.norm() - (1.0 / 3.0_f64).sqrt()).abs() <= 1e-9);
        }
    }

    #[test]
    fn split_state_with_non_adjacent_antipodal_pair() {
        // the zero-expectation pair (0, π) is separated by bystander
        // phases on both sides; conjugate by a Haar frame
        for trial in 0..20u64 {
            let mut rng = stream_rng(225, trial);
            let inner: f64 = rng.random_range(0.1..PI - 0.1);
            let outer: f64 = rng.random_range(PI + 0.1..TAU - 0.1);
            let q = crate::haar::haar_unitary(4, &mut rng);
            let diag = diag(&[0.0, inner, PI, outer]);
            let m = certify_unitary(
                q.matrix()
                    .mul(diag.matrix())
                    .unwrap()
                    .mul(&q.matrix().adjoint())
                    .unwrap(),
                1e-8,
            )
            .unwrap();
            let psi = split_state(&m).unwrap();
            let expectation = expectation_modulus(&m, &psi).unwrap();
            assert!(expectation <= 1e-9, "trial {trial}: {expectation:.3e}");
        }
    }

    #[test]
    fn spectral_split_reads_off_antipodal_pair() {
        let m = diag(&[0.3, 0.3 + PI, 1.0]);
        let split = spectral_split(&m).unwrap();
        assert!((split.phase_beta - 0.3).abs() <= 1e-9);
        let ip = split.plus_vector.inner(&split.minus_vector).unwrap().norm();
        assert!(ip <= 1e-10);
    }

    #[test]
    fn claim_on_reflection_needs_single_run() {
        let w = diag(&[PI, 0.0]);
        let claim = claim_synthesize(&w).unwrap();
        assert_eq!(claim.num_runs, 1);
        assert!(!claim.bumped);
        let defect = claim
            .interleaver_core
            .matrix()
            .frobenius_distance(&ComplexSquareMatrix::identity(2));
        assert!(defect <= 1e-12);
    }

    #[test]
    fn claim_on_quarter_phase_doubles() {
        // W = diag(i, 1): Θ = π/2, N = 2, α = 0 so X = I and
        // ⟨ψ|W²|ψ⟩ = (−1+1)/2 = 0 on ψ = (e₀+e₁)/√2.
        let w = diag(&[PI / 2.0, 0.0]);
        let claim = claim_synthesize(&w).unwrap();
        assert_eq!(claim.num_runs, 2);
        let x_defect = claim
            .interleaver_core
            .matrix()
            .frobenius_distance(&ComplexSquareMatrix::identity(2));
        assert!(x_defect <= 1e-9);
        for a in claim.input.amplitudes() {
            assert!((a.norm() - 0.5_f64.sqrt()).abs() <= 1e-9);
        }
        let chain = chain_operator(&claim.interleaver_core, &w, 2).unwrap();
        assert!(expectation_modulus(&chain, &claim.input).unwrap() <= 1e-12);
    }

    #[test]
    fn claim_postcondition_on_random_qutrits() {
        for stream in 0..40 {
            let w = haar_unitary_where(3, &mut stream_rng(61, stream), 10_000, |u| {
                let t = theta(u).unwrap_or(0.0);
                t > 0.05 && t < PI - 0.05
            })
            .unwrap();
            let claim = claim_synthesize(&w).unwrap();
            let chain =
                chain_operator(&claim.interleaver_core, &w, claim.num_runs).unwrap();
            let overlap = expectation_modulus(&chain, &claim.input).unwrap();
            assert!(overlap <= 1e-9, "stream {stream}: overlap {overlap:.3e}");
        }
    }

    #[test]
    fn protocol_for_reflection_vs_identity() {
        let u = diag(&[PI, 0.0]);
        let v = UnitaryOperator::identity(2);
        let p = synthesize_protocol(&u, &v).unwrap();
        assert_eq!(p.num_runs(), 1);
        assert!(p.interleavers().is_empty());
        assert!(p.orth_defect() <= 1e-12);
        let ip = p.branch_u_output().inner(p.branch_v_output()).unwrap();
        assert!(ip.norm() <= 1e-12);
    }

    #[test]
    fn protocol_for_quarter_phase_matches_hand_computation() {
        let u = diag(&[PI / 2.0, 0.0]); // diag(i, 1)
        let v = UnitaryOperator::identity(2);
        let p = synthesize_protocol(&u, &v).unwrap();
        assert_eq!(p.num_runs(), 2);
        assert_eq!(p.interleavers().len(), 1);
        // the single interleaver is U†
        let defect = p.interleavers()[0]
            .matrix()
            .frobenius_distance(&u.adjoint().matrix().clone());
        assert!(defect <= 1e-12);
        // ψ_U = Uψ = (i·e₀ + e₁)/√2, ψ_V = U†ψ = (−i·e₀ + e₁)/√2
        let s = 0.5_f64.sqrt();
        let psi_u = p.branch_u_output().amplitudes();
        assert!((psi_u[0] - Complex64::new(0.0, s)).norm() <= 1e-12);
        assert!((psi_u[1] - Complex64::new(s, 0.0)).norm() <= 1e-12);
        let ip = p.branch_u_output().inner(p.branch_v_output()).unwrap();
        assert!(ip.norm() <= 1e-12);
    }

    #[test]
    fn protocols_certify_on_haar_pairs() {
        for d in [2usize, 3, 4] {
            for stream in 0..25 {
                let u = haar_unitary_seeded(d, 67, stream);
                let v = haar_unitary_seeded(d, 71, stream);
                let p = synthesize_protocol(&u, &v).unwrap();
                assert!(p.orth_defect() <= 1e-7, "d={d} stream={stream}");
                assert_eq!(p.num_runs(), min_runs(&u, &v).unwrap());
                // every interleaver but the last is U†
                let u_dag = u.adjoint();
                for x in &p.interleavers()[..p.interleavers().len().saturating_sub(1)] {
                    assert!(x.matrix().frobenius_distance(u_dag.matrix()) <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn protocol_overlap_is_global_phase_invariant() {
        for stream in 0..10 {
            let u = haar_unitary_seeded(3, 73, stream);
            let v = haar_unitary_seeded(3, 79, stream);
            let phi = stream_rng(83, stream).random::<f64>() * TAU;
            let a = synthesize_protocol(&u, &v).unwrap().orth_defect();
            let b = synthesize_protocol(&u.phase_shifted(phi), &v)
                .unwrap()
                .orth_defect();
            assert!((a - b).abs() <= 1e-9, "stream {stream}: {a} vs {b}");
        }
    }

    #[test]
    fn equal_pair_is_rejected() {
        let u = haar_unitary_seeded(2, 89, 0);
        assert!(matches!(
            synthesize_protocol(&u, &u),
            Err(Error::NotDifferent { .. })
        ));
        let shifted = u.phase_shifted(1.0);
        assert!(matches!(
            synthesize_protocol(&u, &shifted),
            Err(Error::NotDifferent { .. })
        ));
    }

    #[test]
    fn measurement_from_protocol_is_exact() {
        let u = haar_unitary_seeded(3, 97, 1);
        let v = haar_unitary_seeded(3, 101, 1);
        let p = synthesize_protocol(&u, &v).unwrap();
        let m = build_measurement(&p).unwrap();
        assert_eq!(m.len(), 3);
        // d=3 leaves a rank-1 remainder
        let rest_trace = m.projectors()[2].trace();
        assert!((rest_trace.re - 1.0).abs() <= 1e-9);
        let probs = m.probabilities(p.branch_u_output()).unwrap();
        assert!((probs[0] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn qubit_measurement_has_zero_rest() {
        let u = diag(&[PI / 2.0, 0.0]);
        let v = UnitaryOperator::identity(2);
        let p = synthesize_protocol(&u, &v).unwrap();
        let m = build_measurement(&p).unwrap();
        assert!(m.projectors()[2].frobenius_norm() <= 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn bracket_signs_hold_on_sampled_angles(theta in 0.01..(PI - 0.01)) {
            let n = (PI / theta).ceil() as usize;
            prop_assume!((n - 1) as f64 * theta < PI && PI <= n as f64 * theta);
            // signs promised by the bracket: −cos(Nθ/2) ≥ 0, cos((N−2)θ/2) > 0
            prop_assert!(-(n as f64 * theta / 2.0).cos() >= -1e-12);
            prop_assert!(((n as f64 - 2.0) * theta / 2.0).cos() >= 1e-12);
            let alpha = rotation_angle(theta, n).unwrap();
            prop_assert!((0.0..=PI / 2.0).contains(&alpha));
            prop_assert!(trace_equation_residual(theta, n, alpha) <= 1e-9);
        }
    }
}
