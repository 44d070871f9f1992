//! Minimal covering arcs of eigenphase multisets on the unit circle.
//!
//! For a unitary U with eigenphases θ_j, the arc width Θ(U) is the length
//! of the smallest arc containing every e^{iθ_j}. Two different unitaries
//! are perfectly distinguishable in one use iff Θ(U†V) ≥ π, and in general
//! need N = ⌈π/Θ(U†V)⌉ uses. Width ≥ π is equivalent to 0 lying in the
//! convex hull of the spectrum, which this module witnesses explicitly with
//! a ≤3-point convex certificate (Carathéodory in the plane).

use std::f64::consts::{PI, TAU};

use crate::consts::{CEILING_GUARD, ENUMERATION_GUARD, HULL_RESIDUAL_TOL, PHASE_TOL};
use crate::error::{Error, Result};
use crate::spectral::spectral_decompose;
use crate::unitary::UnitaryOperator;
use num_complex::Complex64;

/// Circular distance between two phases, in [0, π].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// A nonempty multiset of phases, each normalized to [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMultiset {
    phases: Vec<f64>,
}

impl PhaseMultiset {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !phases.iter().all(|p| p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            phases: phases.into_iter().map(|p| p.rem_euclid(TAU)).collect(),
        })
    }

    /// Eigenphases of a certified unitary, in decomposition order.
    pub fn from_unitary(u: &UnitaryOperator) -> Result<Self> {
        Ok(Self {
            phases: spectral_decompose(u)?.phases().to_vec(),
        })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    /// Always false; emptiness is rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Cluster representatives after merging phases within `tol` circular
    /// distance, sorted ascending; micro-gaps below `tol` never survive.
    pub fn distinct(&self, tol: f64) -> Vec<f64> {
        self.clusters(tol).into_iter().map(|(rep, _)| rep).collect()
    }

    /// Clusters of (representative phase, lowest original index), sorted by
    /// representative. The representative is the cluster's lowest phase;
    /// clusters touching across the 0/2π seam are merged.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut order: Vec<usize> = (0..self.phases.len()).collect();
        order.sort_by(|&i, &j| {
            self.phases[i]
                .partial_cmp(&self.phases[j])
                .expect("finite phases")
                .then(i.cmp(&j))
        });
        let mut clusters: Vec<(f64, usize)> = Vec::new();
        for idx in order {
            let phase = self.phases[idx];
            match clusters.last() {
                Some(&(rep, _)) if phase - rep <= tol => {
                    // same cluster; keep earliest representative and the
                    // lowest original index
                    let last = clusters.last_mut().expect("nonempty");
                    last.1 = last.1.min(idx);
                }
                _ => clusters.push((phase, idx)),
            }
        }
        // merge the last cluster into the first across the seam
        if clusters.len() > 1 {
            let first = clusters[0].0;
            let last = clusters[clusters.len() - 1].0;
            if first + TAU - last <= tol {
                let (_, last_idx) = clusters.pop().expect("nonempty");
                clusters[0].1 = clusters[0].1.min(last_idx);
            }
        }
        clusters
    }

    /// Lowest original index whose phase is circularly closest to `target`.
    pub fn index_nearest(&self, target: f64) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (i, &p) in self.phases.iter().enumerate() {
            let d = circular_distance(p, target);
            if d + 1e-15 < best_dist {
                best = i;
                best_dist = d;
            }
        }
        best
    }
}

/// A circular arc [start, start+width] on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    /// Start phase in [0, 2π).
    pub start: f64,
    /// Width in [0, 2π).
    pub width: f64,
}

impl Arc {
    /// Whether `phase` lies within the arc, up to `tol`.
    pub fn covers(&self, phase: f64, tol: f64) -> bool {
        (phase - self.start).rem_euclid(TAU) <= self.width + tol
    }
}

/// Smallest arc containing every phase of the multiset: the complement of
/// the largest circular gap between consecutive distinct phases.
pub fn minimal_covering_arc(phases: &PhaseMultiset) -> Arc {
    let distinct = phases.distinct(PHASE_TOL);
    let n = distinct.len();
    if n == 1 {
        return Arc {
            start: distinct[0],
            width: 0.0,
        };
    }
    let mut max_gap = f64::NEG_INFINITY;
    let mut start = distinct[0];
    for i in 0..n {
        let next = distinct[(i + 1) % n];
        let gap = (next - distinct[i]).rem_euclid(TAU);
        if gap > max_gap + 1e-15 {
            max_gap = gap;
            start = next;
        }
    }
    Arc {
        start,
        width: TAU - max_gap,
    }
}

/// Arc width Θ(U) of the spectrum of a certified unitary.
pub fn theta(u: &UnitaryOperator) -> Result<f64> {
    Ok(minimal_covering_arc(&PhaseMultiset::from_unitary(u)?).width)
}

/// Run count ⌈π/Θ(U†V)⌉ needed to discriminate U from V perfectly.
///
/// The guard inside the ceiling keeps a width that lands a hair below an
/// exact divisor of π from inflating the count by one.
pub fn min_runs(u: &UnitaryOperator, v: &UnitaryOperator) -> Result<usize> {
    let w = u.adjoint().compose(v)?;
    min_runs_from_width(theta(&w)?)
}

pub(crate) fn min_runs_from_width(width: f64) -> Result<usize> {
    if width <= PHASE_TOL {
        return Err(Error::NotDifferent { width });
    }
    Ok(((PI / width - CEILING_GUARD).ceil() as usize).max(1))
}

/// Convex weights on ≤ 3 spectrum points whose weighted sum of unit
/// vectors vanishes, witnessing 0 in the hull.
#[derive(Debug, Clone, PartialEq)]
pub struct HullCertificate {
    /// Indices into the generating multiset (lowest index per cluster).
    pub support: Vec<usize>,
    /// Nonnegative weights summing to 1, aligned with `support`.
    pub weights: Vec<f64>,
}

impl HullCertificate {
    /// |Σ_j w_j e^{iθ_j}| evaluated against the generating multiset.
    pub fn residual(&self, phases: &PhaseMultiset) -> f64 {
        self.support
            .iter()
            .zip(&self.weights)
            .map(|(&i, &w)| Complex64::from_polar(w, phases.phases()[i]))
            .sum::<Complex64>()
            .norm()
    }
}

/// Finds a zero-in-hull certificate for a multiset whose covering arc is at
/// least π wide (up to [`PHASE_TOL`]).
pub fn zero_hull_weights(phases: &PhaseMultiset) -> Result<HullCertificate> {
    let arc = minimal_covering_arc(phases);
    if arc.width < PI - PHASE_TOL {
        return Err(Error::NoCertificate { width: arc.width });
    }
    let clusters = phases.clusters(PHASE_TOL);
    let points: Vec<(Complex64, usize)> = clusters
        .iter()
        .map(|&(rep, idx)| (Complex64::from_polar(1.0, rep), idx))
        .collect();

    // Pairs first: 0 on a chord means an antipodal pair.
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let (zi, ki) = points[i];
            let (zj, kj) = points[j];
            let diff = zi - zj;
            let denom = diff.norm_sqr();
            if denom < 1e-30 {
                continue;
            }
            let t = (-(diff.conj() * zj).re / denom).clamp(0.0, 1.0);
            let residual = (zi * t + zj * (1.0 - t)).norm();
            if residual <= HULL_RESIDUAL_TOL {
                return Ok(HullCertificate {
                    support: vec![ki, kj],
                    weights: vec![t, 1.0 - t],
                });
            }
        }
    }
    // Triangles: solve w_i z_i + w_j z_j + w_k z_k = 0, Σw = 1.
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            for k in (j + 1)..points.len() {
                if let Some(cert) = triangle_certificate(&points, i, j, k) {
                    let residual = cert.residual(phases);
                    if residual <= HULL_RESIDUAL_TOL {
                        return Ok(cert);
                    }
                }
            }
        }
    }
    Err(Error::NoCertificate { width: arc.width })
}

fn triangle_certificate(
    points: &[(Complex64, usize)],
    i: usize,
    j: usize,
    k: usize,
) -> Option<HullCertificate> {
    let (zi, ki) = points[i];
    let (zj, kj) = points[j];
    let (zk, kk) = points[k];
    // rows: Re, Im, and the weight-sum constraint
    let m = [
        [zi.re, zj.re, zk.re],
        [zi.im, zj.im, zk.im],
        [1.0, 1.0, 1.0],
    ];
    let rhs = [0.0, 0.0, 1.0];
    let det = det3(&m);
    if det.abs() < 1e-12 {
        return None;
    }
    let mut w = [0.0; 3];
    for col in 0..3 {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        w[col] = det3(&mc) / det;
    }
    if w.iter().any(|&x| x < -1e-9) {
        return None;
    }
    let mut w: Vec<f64> = w.iter().map(|&x| x.max(0.0)).collect();
    let sum: f64 = w.iter().sum();
    for x in &mut w {
        *x /= sum;
    }
    Some(HullCertificate {
        support: vec![ki, kj, kk],
        weights: w,
    })
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Arc width of U^{⊗k}, computed from the k-fold sums of U's eigenphases
/// without materializing the d^k-dimensional operator.
pub fn theta_tensor_power(u: &UnitaryOperator, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(Error::PreconditionViolation(
            "tensor power requires k >= 1".into(),
        ));
    }
    let distinct = PhaseMultiset::from_unitary(u)?.distinct(PHASE_TOL);
    let combos = combinations_with_repetition(distinct.len() as u128, k as u128);
    if combos > ENUMERATION_GUARD {
        return Err(Error::TooLarge {
            size: combos,
            guard: ENUMERATION_GUARD,
        });
    }
    let mut sums = Vec::with_capacity(combos as usize);
    // odometer over non-decreasing index tuples
    let mut idx = vec![0usize; k];
    loop {
        sums.push(idx.iter().map(|&i| distinct[i]).sum::<f64>().rem_euclid(TAU));
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(minimal_covering_arc(&PhaseMultiset::new(sums)?).width);
            }
            pos -= 1;
            if idx[pos] + 1 < distinct.len() {
                idx[pos] += 1;
                let bump = idx[pos];
                for slot in idx.iter_mut().skip(pos + 1) {
                    *slot = bump;
                }
                break;
            }
        }
    }
}

fn combinations_with_repetition(n: u128, k: u128) -> u128 {
    // C(n+k−1, k), saturating
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul(n + i);
        result /= i + 1;
        if result > ENUMERATION_GUARD * 2 {
            return u128::MAX / 2;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::stream_rng;
    use crate::haar::haar_unitary_seeded;
    use proptest::prelude::*;
    use rand::Rng;

    /// Brute force: the optimal arc starts at one of the input phases.
    fn brute_force_width(phases: &[f64]) -> f64 {
        phases
            .iter()
            .map(|&start| {
                phases
                    .iter()
                    .map(|&p| (p - start).rem_euclid(TAU))
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn single_point_has_zero_width() {
        let arc = minimal_covering_arc(&PhaseMultiset::new(vec![0.0]).unwrap());
        assert_eq!(arc.width, 0.0);
    }

    #[test]
    fn quarter_half_multiset() {
        // gaps are {π/2, π/2, π}; the arc complements the widest one
        let arc =
            minimal_covering_arc(&PhaseMultiset::new(vec![0.0, PI / 2.0, PI]).unwrap());
        assert!((arc.width - PI).abs() <= 1e-12);
        assert!((arc.start - 0.0).abs() <= 1e-12);
        assert!((brute_force_width(&[0.0, PI / 2.0, PI]) - PI).abs() <= 1e-12);
    }

    #[test]
    fn symmetric_third_roots() {
        let phases = vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0];
        let arc = minimal_covering_arc(&PhaseMultiset::new(phases.clone()).unwrap());
        assert!((arc.width - 2.0 * TAU / 3.0).abs() <= 1e-12);
        assert!((brute_force_width(&phases) - arc.width).abs() <= 1e-12);
    }

    #[test]
    fn covering_and_minimality_against_brute_force() {
        for trial in 0..10_000u64 {
            let mut rng = stream_rng(101, trial);
            let n = rng.random_range(1..=12);
            let phases: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
            let ms = PhaseMultiset::new(phases.clone()).unwrap();
            let arc = minimal_covering_arc(&ms);
            for &p in &phases {
                assert!(arc.covers(p, 1e-12), "trial {trial}: {p} outside arc");
            }
            let oracle = brute_force_width(&phases);
            assert!(
                (arc.width - oracle).abs() <= 1e-9,
                "trial {trial}: width {} vs brute force {}",
                arc.width,
                oracle
            );
        }
    }

    #[test]
    fn micro_gaps_are_merged() {
        let ms = PhaseMultiset::new(vec![0.0, 1e-9, TAU - 1e-9]).unwrap();
        let arc = minimal_covering_arc(&ms);
        assert!(arc.width <= 1e-8, "width {}", arc.width);
    }

    #[test]
    fn min_runs_examples() {
        assert_eq!(min_runs_from_width(PI).unwrap(), 1);
        assert_eq!(min_runs_from_width(PI / 4.0).unwrap(), 4);
        assert_eq!(min_runs_from_width(2.0 * PI / 3.0).unwrap(), 2);
        assert!(matches!(
            min_runs_from_width(1e-9),
            Err(Error::NotDifferent { .. })
        ));
    }

    #[test]
    fn theta_of_identity_is_zero() {
        assert_eq!(theta(&UnitaryOperator::identity(3)).unwrap(), 0.0);
    }

    #[test]
    fn theta_of_two_point_spectrum() {
        for &t in &[0.3, 1.0, PI / 2.0, PI - 0.01, PI] {
            let u = UnitaryOperator::from_phases(&[t, 0.0]);
            assert!((theta(&u).unwrap() - t).abs() <= 1e-12);
        }
    }

    #[test]
    fn theta_is_conjugation_invariant() {
        for stream in 0..50 {
            let u = haar_unitary_seeded(3, 23, stream);
            let x = haar_unitary_seeded(3, 29, stream);
            let conj = x.compose(&u).unwrap().compose(&x.adjoint()).unwrap();
            let a = theta(&u).unwrap();
            let b = theta(&conj).unwrap();
            assert!((a - b).abs() <= 1e-9, "stream {stream}: {a} vs {b}");
        }
    }

    #[test]
    fn theta_matches_adjoint_and_global_phase() {
        for d in [2usize, 3, 4] {
            for stream in 0..150 {
                let u = haar_unitary_seeded(d, 31 + d as u64, stream);
                let t = theta(&u).unwrap();
                assert!((t - theta(&u.adjoint()).unwrap()).abs() <= 1e-9);
                let phi = stream_rng(37, stream).random::<f64>() * TAU;
                assert!((t - theta(&u.phase_shifted(phi)).unwrap()).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn antipodal_pair_certificate() {
        let ms = PhaseMultiset::new(vec![0.0, PI]).unwrap();
        let cert = zero_hull_weights(&ms).unwrap();
        assert_eq!(cert.support, vec![0, 1]);
        assert!((cert.weights[0] - 0.5).abs() <= 1e-12);
        assert!(cert.residual(&ms) <= 1e-10);
    }

    #[test]
    fn symmetric_triple_certificate() {
        let ms = PhaseMultiset::new(vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0]).unwrap();
        let cert = zero_hull_weights(&ms).unwrap();
        assert_eq!(cert.support.len(), 3);
        for w in &cert.weights {
            assert!((w - 1.0 / 3.0).abs() <= 1e-12);
        }
        assert!(cert.residual(&ms) <= 1e-10);
    }

    #[test]
    fn certificate_picks_antipodal_pair_inside_larger_set() {
        let ms = PhaseMultiset::new(vec![0.0, PI / 2.0, 3.0 * PI / 2.0]).unwrap();
        let cert = zero_hull_weights(&ms).unwrap();
        assert_eq!(cert.support, vec![1, 2]);
        assert!((cert.weights[0] - 0.5).abs() <= 1e-12);
        assert!((cert.weights[1] - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn no_certificate_below_pi() {
        let ms = PhaseMultiset::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            zero_hull_weights(&ms),
            Err(Error::NoCertificate { .. })
        ));
    }

    /// Grid-search oracle: 0 is outside the hull iff some direction sees
    /// every point strictly on its positive side.
    fn zero_outside_hull_by_grid(phases: &[f64]) -> bool {
        (0..20_000).any(|i| {
            let dir = TAU * i as f64 / 20_000.0;
            phases.iter().all(|&p| (p - dir).cos() > 1e-9)
        })
    }

    #[test]
    fn certificate_agrees_with_grid_oracle() {
        for trial in 0..2000u64 {
            let mut rng = stream_rng(211, trial);
            let n = rng.random_range(1..=8);
            let phases: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
            let ms = PhaseMultiset::new(phases.clone()).unwrap();
            let width = minimal_covering_arc(&ms).width;
            match zero_hull_weights(&ms) {
                Ok(cert) => {
                    assert!(cert.residual(&ms) <= 1e-10);
                    assert!(cert.support.len() <= 3);
                }
                Err(Error::NoCertificate { .. }) => {
                    // must never happen once the width clears π
                    assert!(
                        width < PI,
                        "trial {trial}: refused certificate at width {width}"
                    );
                    assert!(zero_outside_hull_by_grid(&phases) || width >= PI - 1e-4);
                }
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn tensor_power_enumeration_matches_expected_sums() {
        // phase sums of diag(e^{iπ/3}, 1) at k = 3: {0, π/3, 2π/3, π}
        let u = UnitaryOperator::from_phases(&[PI / 3.0, 0.0]);
        let width = theta_tensor_power(&u, 3).unwrap();
        assert!((width - PI).abs() <= 1e-12);
        assert!((theta_tensor_power(&u, 1).unwrap() - PI / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn tensor_power_matches_materialized_operator() {
        for stream in 0..20 {
            let u = haar_unitary_seeded(2, 41, stream);
            for k in 1..=3usize {
                let combinatorial = theta_tensor_power(&u, k).unwrap();
                let mut big = u.clone();
                for _ in 1..k {
                    big = big.tensor(&u).unwrap();
                }
                let materialized = theta(&big).unwrap();
                assert!(
                    (combinatorial - materialized).abs() <= 1e-9,
                    "stream {stream} k={k}: {combinatorial} vs {materialized}"
                );
            }
        }
    }

    #[test]
    fn tensor_power_lower_bound_holds() {
        for stream in 0..30 {
            for d in [2usize, 3] {
                let u = haar_unitary_seeded(d, 43, stream);
                let base = theta(&u).unwrap();
                for k in 1..=4usize {
                    let width = theta_tensor_power(&u, k).unwrap();
                    let bound = (k as f64 * base).min(PI);
                    assert!(
                        width >= bound - 1e-9,
                        "d={d} stream={stream} k={k}: {width} < {bound}"
                    );
                }
            }
        }
    }

    #[test]
    fn tensor_power_guard_rejects_huge_enumerations() {
        let phases: Vec<f64> = (0..16).map(|i| i as f64 * 0.05).collect();
        let u = UnitaryOperator::from_phases(&phases);
        assert!(matches!(
            theta_tensor_power(&u, 40),
            Err(Error::TooLarge { .. })
        ));
    }

    proptest! {
        #[test]
        fn arc_always_covers_inputs(
            phases in proptest::collection::vec(0.0..TAU, 1..12)
        ) {
            let ms = PhaseMultiset::new(phases.clone()).unwrap();
            let arc = minimal_covering_arc(&ms);
            prop_assert!(arc.width >= 0.0 && arc.width < TAU);
            for p in phases {
                prop_assert!(arc.covers(p, 1e-9));
            }
        }

        #[test]
        fn width_matches_brute_force(
            phases in proptest::collection::vec(0.0..TAU, 1..10)
        ) {
            let ms = PhaseMultiset::new(phases.clone()).unwrap();
            let arc = minimal_covering_arc(&ms);
            prop_assert!((arc.width - brute_force_width(&phases)).abs() <= 1e-9);
        }
    }
}
