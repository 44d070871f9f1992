//! Mixed-scheme planning: m-partitions of N runs and the tradeoff between
//! circuits used in parallel (spatial cost) and steps taken (temporal
//! cost).
//!
//! Splitting N runs as k₁ ≥ … ≥ k_m across m systems, where system i sees
//! the unknown circuit k_i times sequentially, still discriminates U from
//! the identity because the phase sums Σ k_i θ_{j_i} of U^{k₁}⊗…⊗U^{k_m}
//! spread at least as wide as min{NΘ(U), π}. The most uniform partition
//! minimizes the scheme length max_i k_i = ⌈N/m⌉.

use std::f64::consts::{PI, TAU};

use crate::arc::{minimal_covering_arc, PhaseMultiset};
use crate::consts::{ENUMERATION_GUARD, PHASE_TOL};
use crate::error::{Error, Result};
use crate::unitary::UnitaryOperator;

/// An m-partition of N with non-increasing parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    total_runs: usize,
    copies: usize,
    parts: Vec<usize>,
}

impl PartitionPlan {
    pub fn total_runs(&self) -> usize {
        self.total_runs
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Scheme length max_i k_i.
    pub fn length(&self) -> usize {
        self.parts[0]
    }
}

/// Spatial/temporal cost summary of a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceReport {
    /// Temporal cost: sequential steps = scheme length.
    pub steps: usize,
    /// Spatial cost: circuits applied in parallel.
    pub circuits: usize,
    /// Qudits requiring joint (entangled) preparation; 0 for the pure
    /// sequential scheme.
    pub entangled_width: usize,
}

/// Most uniform m-partition of N: r parts of ⌈N/m⌉ followed by m−r parts
/// one smaller, where r = N − (⌈N/m⌉−1)·m.
pub fn plan_mixed(total_runs: usize, copies: usize) -> Result<PartitionPlan> {
    if copies < 1 || copies > total_runs {
        return Err(Error::InvalidPartitionRequest {
            copies,
            total: total_runs,
        });
    }
    let n_min = total_runs.div_ceil(copies);
    let r = total_runs - (n_min - 1) * copies;
    let mut parts = vec![n_min; r];
    parts.resize(copies, n_min - 1);
    Ok(PartitionPlan {
        total_runs,
        copies,
        parts,
    })
}

/// Checks combinatorially that the plan discriminates `u` from the
/// identity.
///
/// For m ≥ 2 the tensor factors are plain powers, so the covering arc of
/// {Σ_i k_i·θ_{j_i} mod 2π} must reach π. A single segment (m = 1) is the
/// fully sequential scheme, which interleaves auxiliary unitaries between
/// runs; its reach is that of the N-fold tensor sums, so the check becomes
/// [`crate::arc::theta_tensor_power`] ≥ π.
pub fn validate_plan(u: &UnitaryOperator, plan: &PartitionPlan) -> Result<bool> {
    if plan.copies() == 1 {
        let width = crate::arc::theta_tensor_power(u, plan.total_runs())?;
        return Ok(width >= PI - 1e-9);
    }
    let distinct = PhaseMultiset::from_unitary(u)?.distinct(PHASE_TOL);
    let r = distinct.len() as u128;
    let size = r.checked_pow(plan.copies() as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_GUARD {
        return Err(Error::TooLarge {
            size,
            guard: ENUMERATION_GUARD,
        });
    }
    let mut sums = Vec::with_capacity(size as usize);
    let mut idx = vec![0usize; plan.copies()];
    loop {
        let total: f64 = idx
            .iter()
            .zip(plan.parts())
            .map(|(&j, &k)| k as f64 * distinct[j])
            .sum();
        sums.push(total.rem_euclid(TAU));
        let mut pos = plan.copies();
        loop {
            if pos == 0 {
                let width = minimal_covering_arc(&PhaseMultiset::new(sums)?).width;
                return Ok(width >= PI - 1e-9);
            }
            pos -= 1;
            if idx[pos] + 1 < distinct.len() {
                idx[pos] += 1;
                for slot in idx.iter_mut().skip(pos + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Steps/circuits/entanglement summary for the minimal-length m-plan.
pub fn resource_report(total_runs: usize, copies: usize) -> Result<ResourceReport> {
    let plan = plan_mixed(total_runs, copies)?;
    Ok(ResourceReport {
        steps: plan.length(),
        circuits: copies,
        entangled_width: if copies > 1 { copies } else { 0 },
    })
}
