//! Numerical corroboration of the arc inequalities behind run-count
//! optimality.
//!
//! Three families of checks live here:
//!
//! - **Subadditivity**: Θ(UV) ≤ Θ(U) + Θ(V) whenever Θ(U)+Θ(V) < π.
//! - **Chain bound**: with k−1 arbitrary interleavers, the chained
//!   operator (X_{k−1}⋯X₁)†(U X_{k−1}⋯X₁ U) keeps its arc below k·Θ(U);
//!   for k below the minimal run count this stays under π, so no input
//!   state can reach orthogonality. [`optimality_search`] attacks the
//!   bound with a derivative-free search over interleaver tuples; the
//!   search failing to reach π is regression evidence, not a proof.
//! - **Qubit criterion**: for d = 2 the three conditions tr(U†V) = 0,
//!   Θ(U†V) = π, and orthogonality of (I⊗U)|Φ⟩, (I⊗V)|Φ⟩ on the
//!   maximally entangled |Φ⟩ coincide.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arc::{min_runs, theta};
use crate::consts::SEARCH_TOL;
use crate::error::{Error, Result};
use crate::exec::{indexed_map, stream_rng};
use crate::haar::{haar_unitary, random_state};
use crate::matrix::ComplexSquareMatrix;
use crate::state::StateVector;
use crate::unitary::{certify_unitary, UnitaryOperator};

/// Result of one subadditivity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubadditivityCheck {
    /// Θ(UV).
    pub lhs: f64,
    /// Θ(U) + Θ(V).
    pub rhs: f64,
    pub holds: bool,
}

/// Checks Θ(UV) ≤ Θ(U) + Θ(V) under the hypothesis Θ(U)+Θ(V) < π.
pub fn check_subadditivity(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
) -> Result<SubadditivityCheck> {
    let rhs = theta(u)? + theta(v)?;
    if rhs >= PI {
        return Err(Error::HypothesisViolation { sum: rhs });
    }
    let product = certify_unitary(u.matrix().mul(v.matrix())?, 1e-8)?;
    let lhs = theta(&product)?;
    Ok(SubadditivityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}

/// Θ of the chained operator (X_{k−1}⋯X₁)†·(U X_{k−1} U ⋯ X₁ U) with
/// k = interleavers + 1 uses of `u`.
pub fn chain_theta(u: &UnitaryOperator, interleavers: &[UnitaryOperator]) -> Result<f64> {
    theta(&chain_operator(u, interleavers)?)
}

fn chain_operator(
    u: &UnitaryOperator,
    interleavers: &[UnitaryOperator],
) -> Result<UnitaryOperator> {
    let mut forward = u.matrix().clone();
    let mut auxiliary = ComplexSquareMatrix::identity(u.dim());
    for x in interleavers {
        if x.dim() != u.dim() {
            return Err(Error::DimensionMismatch {
                left: u.dim(),
                right: x.dim(),
            });
        }
        forward = u.matrix().mul(x.matrix())?.mul(&forward)?;
        auxiliary = x.matrix().mul(&auxiliary)?;
    }
    certify_unitary(auxiliary.adjoint().mul(&forward)?, 1e-8)
}

/// Search configuration for [`optimality_search`].
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Pattern-search passes per restart.
    pub iterations: usize,
    pub seed: u64,
    /// States sampled per restart when probing branch overlaps.
    pub overlap_samples: usize,
    pub parametrization: Parametrization,
}

/// How interleavers are coordinatized for the derivative-free search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parametrization {
    /// d diagonal phases plus d(d−1)/2 phased Givens rotations per
    /// interleaver: d² real parameters, covering all of U(d).
    PhasedGivens,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            iterations: 40,
            seed: 0,
            overlap_samples: 200,
            parametrization: Parametrization::PhasedGivens,
        }
    }
}

/// Outcome of the chain-bound search at a fixed k.
#[derive(Debug, Clone, Copy)]
pub struct OptimalityReport {
    pub k: usize,
    /// k·Θ(U†V), the analytic ceiling for the chain arc.
    pub chain_bound: f64,
    /// Widest chain arc any restart reached.
    pub best_chain_theta: f64,
    /// Smallest branch-overlap modulus any sampled state reached.
    pub best_orthogonality_gap: f64,
    /// Total states sampled across restarts.
    pub samples: usize,
    pub restarts: usize,
    pub seed: u64,
    pub pass: bool,
}

impl OptimalityReport {
    /// Analytic floor for branch overlaps: the distance from the origin to
    /// the chord of a unit-circle arc of width `chain_bound`.
    pub fn overlap_floor(&self) -> f64 {
        (self.chain_bound.min(PI) / 2.0).cos()
    }
}

/// Tries to defeat the chain bound for `k < min_runs(u, v)` uses: random
/// restarts of a coordinate pattern search over interleaver tuples,
/// maximizing the chain arc of W = U†V, plus Monte Carlo probing of the
/// branch overlap on the best tuple of each restart.
pub fn optimality_search(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
    k: usize,
    cfg: &SearchConfig,
) -> Result<OptimalityReport> {
    let n = min_runs(u, v)?;
    if k < 1 || k >= n {
        return Err(Error::PreconditionViolation(format!(
            "k = {k} must satisfy 1 <= k < min_runs = {n}"
        )));
    }
    let w = u.adjoint().compose(v)?;
    let base = theta(&w)?;
    let chain_bound = k as f64 * base;
    let d = w.dim();
    let params_per_interleaver = d * d;
    let num_params = params_per_interleaver * (k - 1);

    struct RestartOutcome {
        best_theta: f64,
        min_overlap: f64,
    }

    let outcomes: Vec<Result<RestartOutcome>> = indexed_map(cfg.restarts, |restart| {
        let mut rng = stream_rng(cfg.seed, restart as u64);
        let mut params: Vec<f64> = (0..num_params).map(|_| rng.random::<f64>() * TAU).collect();
        let mut best = evaluate_chain(&w, &params, d, k)?;
        let mut step = 0.5;
        for _pass in 0..cfg.iterations {
            let mut improved = false;
            for i in 0..num_params {
                for delta in [step, -step] {
                    let saved = params[i];
                    params[i] = (saved + delta).rem_euclid(TAU);
                    let value = evaluate_chain(&w, &params, d, k)?;
                    if value > best + 1e-12 {
                        best = value;
                        improved = true;
                    } else {
                        params[i] = saved;
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-4 {
                    break;
                }
            }
        }
        // probe branch overlaps on this restart's best tuple
        let chain = chain_operator(&w, &interleavers_from_params(&params, d, k)?)?;
        let mut min_overlap = f64::INFINITY;
        for _ in 0..cfg.overlap_samples {
            let psi = random_state(d, &mut rng);
            let overlap = psi.inner(&chain.apply(&psi)?)?.norm();
            min_overlap = min_overlap.min(overlap);
        }
        Ok(RestartOutcome {
            best_theta: best,
            min_overlap,
        })
    });

    let mut best_chain_theta = 0.0_f64;
    let mut best_orthogonality_gap = f64::INFINITY;
    for outcome in outcomes {
        let outcome = outcome?;
        best_chain_theta = best_chain_theta.max(outcome.best_theta);
        best_orthogonality_gap = best_orthogonality_gap.min(outcome.min_overlap);
    }
    let floor = (chain_bound.min(PI) / 2.0).cos();
    let pass = best_chain_theta < PI - SEARCH_TOL
        && best_chain_theta <= chain_bound.min(PI) + SEARCH_TOL
        && best_orthogonality_gap >= floor - SEARCH_TOL;
    Ok(OptimalityReport {
        k,
        chain_bound,
        best_chain_theta,
        best_orthogonality_gap,
        samples: cfg.restarts * cfg.overlap_samples,
        restarts: cfg.restarts,
        seed: cfg.seed,
        pass,
    })
}

fn evaluate_chain(w: &UnitaryOperator, params: &[f64], d: usize, k: usize) -> Result<f64> {
    chain_theta(w, &interleavers_from_params(params, d, k)?)
}

fn interleavers_from_params(params: &[f64], d: usize, k: usize) -> Result<Vec<UnitaryOperator>> {
    let per = d * d;
    (0..k - 1)
        .map(|i| unitary_from_params(d, &params[i * per..(i + 1) * per]))
        .collect()
}

/// Element of U(d) from d diagonal phases followed by (angle, phase) pairs
/// for each index pair (p, q), p < q, in lexicographic order.
pub fn unitary_from_params(d: usize, params: &[f64]) -> Result<UnitaryOperator> {
    if params.len() != d * d {
        return Err(Error::DimensionMismatch {
            left: d * d,
            right: params.len(),
        });
    }
    let phases: Vec<Complex64> = params[..d]
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    let mut m = ComplexSquareMatrix::diagonal(&phases);
    let mut cursor = d;
    for p in 0..d {
        for q in (p + 1)..d {
            let angle = params[cursor];
            let phase = params[cursor + 1];
            cursor += 2;
            let mut g = ComplexSquareMatrix::identity(d);
            let (c, s) = (angle.cos(), angle.sin());
            g.set(p, p, Complex64::new(c, 0.0));
            g.set(p, q, -Complex64::from_polar(s, phase));
            g.set(q, p, Complex64::from_polar(s, -phase));
            g.set(q, q, Complex64::new(c, 0.0));
            m = g.mul(&m)?;
        }
    }
    certify_unitary(m, 1e-10)
}

/// The three equivalent single-run conditions for a qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitCriterion {
    /// |tr(U†V)| ≤ 1e−9.
    pub trace_zero: bool,
    /// Θ(U†V) ≥ π − 1e−9.
    pub theta_pi: bool,
    /// (I⊗U)|Φ⟩ ⊥ (I⊗V)|Φ⟩ on |Φ⟩ = (|00⟩+|11⟩)/√2.
    pub entangled_check: bool,
}

impl QubitCriterion {
    pub fn agree(&self) -> bool {
        self.trace_zero == self.theta_pi && self.theta_pi == self.entangled_check
    }
}

/// Evaluates the qubit one-run criterion for a d = 2 pair.
///
/// The entangled overlap equals tr(U†V)/2 identically, so its threshold is
/// half the trace threshold; otherwise the three booleans could disagree
/// on a razor-thin band near the boundary.
pub fn qubit_one_run_criterion(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
) -> Result<QubitCriterion> {
    if u.dim() != 2 || v.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let w = u.adjoint().compose(v)?;
    let trace_zero = w.trace().norm() <= 1e-9;
    let theta_pi = theta(&w)? >= PI - 1e-9;

    let phi = StateVector::normalized(vec![
        Complex64::ONE,
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::ONE,
    ])?;
    let id_tensor_w = UnitaryOperator::identity(2).tensor(&w)?;
    let overlap = phi.inner(&id_tensor_w.apply(&phi)?)?.norm();
    let entangled_check = overlap <= 0.5e-9;

    Ok(QubitCriterion {
        trace_zero,
        theta_pi,
        entangled_check,
    })
}

/// Draws a unitary with a prescribed arc width: pinned extremal phases,
/// the rest uniform inside the arc, conjugated by a Haar frame and shifted
/// by a random global phase.
pub fn random_unitary_with_width(
    d: usize,
    width: f64,
    rng: &mut ChaCha8Rng,
) -> Result<UnitaryOperator> {
    assert!((0.0..=PI).contains(&width), "width must lie in [0, π]");
    let mut phases = Vec::with_capacity(d);
    phases.push(0.0);
    if d > 1 {
        phases.push(width);
    }
    for _ in 2..d {
        phases.push(rng.random::<f64>() * width);
    }
    let shift = rng.random::<f64>() * TAU;
    for p in &mut phases {
        *p = (*p + shift).rem_euclid(TAU);
    }
    let q = haar_unitary(d, rng);
    let diag = UnitaryOperator::from_phases(&phases);
    let m = q
        .matrix()
        .mul(diag.matrix())?
        .mul(&q.matrix().adjoint())?;
    certify_unitary(m, 1e-8)
}

/// Aggregate of a randomized subadditivity sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepOutcome {
    pub trials: usize,
    pub violations: usize,
    /// Largest lhs − rhs observed (negative when the bound held with
    /// margin everywhere).
    pub max_excess: f64,
    pub seed: u64,
    /// Lowest trial index that violated, reconstructible via
    /// [`subadditivity_trial_pair`].
    pub first_violation: Option<usize>,
}

impl SweepOutcome {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// The hypothesis-satisfying pair tested by sweep trial `(seed, trial)`:
/// arc widths drawn with Θ(U)+Θ(V) < π by construction, eigenframes
/// Haar-random.
pub fn subadditivity_trial_pair(
    d: usize,
    seed: u64,
    trial: usize,
) -> Result<(UnitaryOperator, UnitaryOperator)> {
    let mut rng = stream_rng(seed, trial as u64);
    let total = rng.random::<f64>() * (PI - 1e-3);
    let split = rng.random::<f64>();
    let u = random_unitary_with_width(d, total * split, &mut rng)?;
    let v = random_unitary_with_width(d, total * (1.0 - split), &mut rng)?;
    Ok((u, v))
}

/// Sweeps `trials` hypothesis-satisfying random pairs.
pub fn subadditivity_sweep(d: usize, trials: usize, seed: u64) -> Result<SweepOutcome> {
    let results: Vec<Result<f64>> = indexed_map(trials, |t| {
        let (u, v) = subadditivity_trial_pair(d, seed, t)?;
        let check = check_subadditivity(&u, &v)?;
        Ok(check.lhs - check.rhs)
    });
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    let mut first_violation = None;
    for (t, r) in results.into_iter().enumerate() {
        let excess = r?;
        max_excess = max_excess.max(excess);
        if excess > 1e-9 {
            violations += 1;
            first_violation.get_or_insert(t);
        }
    }
    Ok(SweepOutcome {
        trials,
        violations,
        max_excess,
        seed,
        first_violation,
    })
}

/// Aggregate of a qubit-criterion sweep.
#[derive(Debug, Clone, Copy)]
pub struct CriterionSweep {
    pub trials: usize,
    pub adversarial: usize,
    pub disagreements: usize,
    pub seed: u64,
    /// Lowest disagreeing case as (was_adversarial, index).
    pub first_disagreement: Option<(bool, usize)>,
}

impl CriterionSweep {
    pub fn pass(&self) -> bool {
        self.disagreements == 0
    }
}

/// The Haar-random pair tested by criterion trial `(seed, trial)`.
pub fn criterion_trial_pair(seed: u64, trial: usize) -> (UnitaryOperator, UnitaryOperator) {
    let mut rng = stream_rng(seed, trial as u64);
    (haar_unitary(2, &mut rng), haar_unitary(2, &mut rng))
}

/// Adversarial criterion pair `index` of `count`: |tr(U†V)| targets spread
/// quadratically over [0, 1e−6], which keeps every target well away from
/// the 1e−9 decision boundary.
pub fn criterion_adversarial_pair(
    seed: u64,
    index: usize,
    count: usize,
) -> Result<(UnitaryOperator, UnitaryOperator)> {
    let mut rng = stream_rng(seed ^ 0x5eed_ad5e, index as u64);
    let frac = if count > 1 {
        index as f64 / (count - 1) as f64
    } else {
        0.0
    };
    let target = 1e-6 * frac * frac;
    // phases {0, π − y} give |tr| = 2 sin(y/2) = target
    let y = 2.0 * (target / 2.0).asin();
    let w = random_unitary_with_width(2, PI - y, &mut rng)?;
    let u = haar_unitary(2, &mut rng);
    let v = certify_unitary(u.matrix().mul(w.matrix())?, 1e-8)?;
    Ok((u, v))
}

/// Sweeps Haar-random qubit pairs plus an adversarial battery near the
/// |tr(U†V)| = 0 boundary, and counts criterion disagreements.
pub fn criterion_sweep(trials: usize, adversarial: usize, seed: u64) -> Result<CriterionSweep> {
    let random_disagreements: Vec<Result<bool>> = indexed_map(trials, |t| {
        let (u, v) = criterion_trial_pair(seed, t);
        Ok(!qubit_one_run_criterion(&u, &v)?.agree())
    });
    let adversarial_disagreements: Vec<Result<bool>> = indexed_map(adversarial, |i| {
        let (u, v) = criterion_adversarial_pair(seed, i, adversarial)?;
        Ok(!qubit_one_run_criterion(&u, &v)?.agree())
    });
    let mut disagreements = 0;
    let mut first_disagreement = None;
    for (t, r) in random_disagreements.into_iter().enumerate() {
        if r? {
            disagreements += 1;
            first_disagreement.get_or_insert((false, t));
        }
    }
    for (i, r) in adversarial_disagreements.into_iter().enumerate() {
        if r? {
            disagreements += 1;
            first_disagreement.get_or_insert((true, i));
        }
    }
    Ok(CriterionSweep {
        trials,
        adversarial,
        disagreements,
        seed,
        first_disagreement,
    })
}
