//! Projective measurements: labeled orthogonal projectors summing to I.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexSquareMatrix;
use crate::state::StateVector;

const PROJECTOR_TOL: f64 = 1e-10;

/// A complete set of mutually orthogonal projectors with outcome labels.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    projectors: Vec<ComplexSquareMatrix>,
    labels: Vec<String>,
}

impl ProjectiveMeasurement {
    /// Validates completeness (Σ P = I), idempotence (P² = P), and pairwise
    /// orthogonality (P_i P_j = 0) within 1e−10.
    pub fn new(projectors: Vec<ComplexSquareMatrix>, labels: Vec<String>) -> Result<Self> {
        if projectors.is_empty() || projectors.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                left: projectors.len(),
                right: labels.len(),
            });
        }
        let dim = projectors[0].dim();
        let mut sum = ComplexSquareMatrix::zeros(dim);
        for p in &projectors {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
            let idem = p.mul(p)?.frobenius_distance(p);
            if idem > PROJECTOR_TOL {
                return Err(Error::NumericalFailure(format!(
                    "projector idempotence defect {idem:.3e}"
                )));
            }
            sum = sum.add(p)?;
        }
        let completeness = sum.frobenius_distance(&ComplexSquareMatrix::identity(dim));
        if completeness > PROJECTOR_TOL {
            return Err(Error::NumericalFailure(format!(
                "projector completeness defect {completeness:.3e}"
            )));
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let cross = projectors[i].mul(&projectors[j])?.frobenius_norm();
                if cross > PROJECTOR_TOL {
                    return Err(Error::NumericalFailure(format!(
                        "projectors {i},{j} overlap {cross:.3e}"
                    )));
                }
            }
        }
        Ok(Self { projectors, labels })
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[ComplexSquareMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Born-rule outcome probabilities ⟨ψ|P_k|ψ⟩, clamped to [0, 1].
    pub fn probabilities(&self, psi: &StateVector) -> Result<Vec<f64>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: psi.dim(),
                right: self.dim(),
            });
        }
        self.projectors
            .iter()
            .map(|p| {
                let pv = p.apply_vec(psi.amplitudes())?;
                let prob: Complex64 = psi
                    .amplitudes()
                    .iter()
                    .zip(&pv)
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                Ok(prob.re.clamp(0.0, 1.0))
            })
            .collect()
    }
}

/// Rank-1 projector |ψ⟩⟨ψ|.
pub fn rank_one_projector(psi: &StateVector) -> ComplexSquareMatrix {
    let d = psi.dim();
    let a = psi.amplitudes();
    let mut p = ComplexSquareMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            p.set(i, j, a[i] * a[j].conj());
        }
    }
    p
}
