//! Eigenphase extraction for unitary matrices.
//!
//! A unitary U is normal, so U = C + iS with commuting Hermitian parts
//! C = (U+U†)/2 and S = (U−U†)/2i, and a frame diagonalizing both
//! diagonalizes U. The solver runs a cyclic complex Jacobi diagonalization
//! on C, clusters its eigenvalues, and re-diagonalizes S restricted to each
//! cluster. The two stages complement each other: where cos θ is too flat
//! to separate phases, sin θ is steep, and vice versa. Eigenvalues of U are
//! then read off as Rayleigh quotients and reported as phases in [0, 2π).
//!
//! Jacobi is chosen over a Schur reduction for its simplicity and its
//! excellent orthogonality at the dimensions used here (d ≤ 32).

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::consts::{GRAM_TOL, RECONSTRUCTION_TOL};
use crate::error::{Error, Result};
use crate::matrix::ComplexSquareMatrix;
use crate::state::StateVector;
use crate::unitary::UnitaryOperator;

/// Hermitian eigenvalues closer than this are treated as one cluster when
/// splitting on the second Hermitian part. Must stay well above the
/// eigenvector mixing scale of the Jacobi sweep (~1e−16/gap).
const CLUSTER_TOL: f64 = 1e-7;

const MAX_SWEEPS: usize = 64;

/// Eigenphases in [0, 2π) with an orthonormal eigenvector frame, sorted by
/// phase.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    phases: Vec<f64>,
    frame: Vec<StateVector>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn frame(&self) -> &[StateVector] {
        &self.frame
    }

    pub fn eigenvalue(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.phases[j])
    }

    /// Rebuilds Σ_j e^{iθ_j} |v_j⟩⟨v_j|.
    pub fn reconstruct(&self) -> ComplexSquareMatrix {
        let d = self.dim();
        let mut m = ComplexSquareMatrix::zeros(d);
        for j in 0..d {
            let lambda = self.eigenvalue(j);
            let v = self.frame[j].amplitudes();
            for r in 0..d {
                for c in 0..d {
                    let cur = m.get(r, c);
                    m.set(r, c, cur + lambda * v[r] * v[c].conj());
                }
            }
        }
        m
    }

    /// Frobenius deviation of the frame's Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let d = self.dim();
        let mut defect = 0.0;
        for i in 0..d {
            for j in 0..d {
                let g = self.frame[i]
                    .inner(&self.frame[j])
                    .expect("frame vectors share a dimension");
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                defect += (g - expected).norm_sqr();
            }
        }
        defect.sqrt()
    }
}

/// Diagonalizes a certified unitary.
pub fn spectral_decompose(u: &UnitaryOperator) -> Result<SpectralDecomposition> {
    let a = u.matrix();
    let d = a.dim();
    let adag = a.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let cos_part = a.add(&adag)?.scale(half);
    let sin_part = a.sub(&adag)?.scale(Complex64::new(0.0, -0.5));

    let (cos_vals, mut vectors) = hermitian_eig(&cos_part)?;

    // Split each cos-degenerate cluster by the sin part.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (cos_vals[end] - cos_vals[end - 1]).abs() <= CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block = project_block(&sin_part, &vectors[start..end]);
            let (_, w) = hermitian_eig(&block)?;
            let rotated = rotate_columns(&vectors[start..end], &w);
            vectors[start..end].clone_from_slice(&rotated);
        }
        start = end;
    }

    // Rayleigh quotients give the eigenvalues; sort by phase.
    let mut pairs: Vec<(f64, Vec<Complex64>)> = vectors
        .into_iter()
        .map(|v| {
            let av = a.apply_vec(&v).expect("dimension fixed above");
            let lambda: Complex64 = v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
            (lambda.arg().rem_euclid(TAU), v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("phases are finite"));

    let phases: Vec<f64> = pairs.iter().map(|(p, _)| *p).collect();
    let frame: Vec<StateVector> = pairs
        .into_iter()
        .map(|(_, v)| StateVector::normalized(v))
        .collect::<Result<_>>()?;

    let decomposition = SpectralDecomposition { phases, frame };
    let gram = decomposition.gram_defect();
    if gram > GRAM_TOL {
        return Err(Error::NumericalFailure(format!(
            "eigenframe gram defect {gram:.3e}"
        )));
    }
    let defect = decomposition.reconstruct().frobenius_distance(a);
    if defect > RECONSTRUCTION_TOL {
        return Err(Error::NumericalFailure(format!(
            "spectral reconstruction defect {defect:.3e}"
        )));
    }
    Ok(decomposition)
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix. Returns
/// eigenvalues in ascending order and matching orthonormal column vectors.
pub fn hermitian_eig(h: &ComplexSquareMatrix) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let d = h.dim();
    // symmetrize defensively; callers pass Hermitian parts
    let mut a = ComplexSquareMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            a.set(i, j, (h.get(i, j) + h.get(j, i).conj()) * 0.5);
        }
    }
    let mut v = ComplexSquareMatrix::identity(d);
    let scale = a.frobenius_norm().max(1e-300);
    let stop = 1e-15 * scale;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= stop {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let beta = a.get(p, q);
                let abs_b = beta.norm();
                if abs_b <= stop / (d as f64) {
                    continue;
                }
                // phase so the (p,q) block becomes real symmetric
                let phase = beta / abs_b;
                let alpha = a.get(p, p).re;
                let gamma = a.get(q, q).re;
                let tau = (gamma - alpha) / (2.0 * abs_b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G: columns p,q ← (c·e_p − s·conj(phase)·e_q,
                //                    s·e_p + c·conj(phase)·e_q)
                let cp = Complex64::new(c, 0.0);
                let sp = Complex64::new(s, 0.0);
                let ph = phase.conj();
                // A ← A·G
                for i in 0..d {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, cp * aip - sp * ph * aiq);
                    a.set(i, q, sp * aip + cp * ph * aiq);
                }
                // A ← G†·A
                for j in 0..d {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, cp * apj - sp * phase * aqj);
                    a.set(q, j, sp * apj + cp * phase * aqj);
                }
                // V ← V·G
                for i in 0..d {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, cp * vip - sp * ph * viq);
                    v.set(i, q, sp * vip + cp * ph * viq);
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > stop {
        return Err(Error::NumericalFailure(format!(
            "jacobi sweep did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..d).map(|i| v.get(i, j)).collect())
        .collect();
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &ComplexSquareMatrix) -> f64 {
    let d = a.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Projects `m` onto the span of `basis`: block[k][l] = b_k† m b_l.
fn project_block(m: &ComplexSquareMatrix, basis: &[Vec<Complex64>]) -> ComplexSquareMatrix {
    let k = basis.len();
    let mut block = ComplexSquareMatrix::zeros(k);
    for (col, b) in basis.iter().enumerate() {
        let mb = m.apply_vec(b).expect("projection dimensions");
        for (row, a) in basis.iter().enumerate() {
            let val: Complex64 = a.iter().zip(&mb).map(|(x, y)| x.conj() * y).sum();
            block.set(row, col, val);
        }
    }
    block
}

/// Mixes `basis` columns by the square coefficient matrix `w`.
fn rotate_columns(basis: &[Vec<Complex64>], w: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let d = basis[0].len();
    let k = basis.len();
    (0..k)
        .map(|new| {
            let mut out = vec![Complex64::ZERO; d];
            for (old, b) in basis.iter().enumerate() {
                let coeff = w[new][old];
                for i in 0..d {
                    out[i] += coeff * b[i];
                }
            }
            out
        })
        .collect()
}
