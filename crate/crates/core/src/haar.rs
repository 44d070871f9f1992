//! Haar-distributed random unitaries and random states.
//!
//! The unitary sampler QR-factors a complex Ginibre matrix and corrects the
//! phases of Q by the signs of R's diagonal, which makes the distribution
//! exactly Haar rather than merely "QR of a Gaussian".

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::exec::stream_rng;
use crate::matrix::ComplexSquareMatrix;
use crate::state::StateVector;
use crate::unitary::{certify_unitary, UnitaryOperator};

/// Standard complex Gaussian (variance 1: each component variance 1/2).
fn ginibre_entry<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2.0_f64.sqrt()
}

/// Haar-random element of U(d).
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> UnitaryOperator {
    let cols = ginibre_columns(dim, rng);
    let (q, r_diag) = gram_schmidt(cols);
    // multiply column j by r_jj/|r_jj| to undo the QR phase convention
    let mut m = ComplexSquareMatrix::zeros(dim);
    for (j, column) in q.iter().enumerate() {
        let phase = r_diag[j] / r_diag[j].norm();
        for (i, &amp) in column.iter().enumerate() {
            m.set(i, j, amp * phase);
        }
    }
    certify_unitary(m, 1e-10).expect("orthonormalized Ginibre matrix must certify")
}

/// Haar-random unitary from the `(seed, stream)` RNG contract.
pub fn haar_unitary_seeded(dim: usize, seed: u64, stream: u64) -> UnitaryOperator {
    haar_unitary(dim, &mut stream_rng(seed, stream))
}

/// Uniformly random pure state (normalized complex Gaussian vector).
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| ginibre_entry(rng)).collect();
        if let Ok(s) = StateVector::normalized(v) {
            return s;
        }
    }
}

/// Haar-random unitary conditioned on a predicate of the operator, with an
/// attempt cap so a bad predicate cannot spin forever.
pub fn haar_unitary_where<R, P>(
    dim: usize,
    rng: &mut R,
    max_attempts: usize,
    accept: P,
) -> Result<UnitaryOperator>
where
    R: Rng,
    P: Fn(&UnitaryOperator) -> bool,
{
    for _ in 0..max_attempts {
        let u = haar_unitary(dim, rng);
        if accept(&u) {
            return Ok(u);
        }
    }
    Err(crate::error::Error::NumericalFailure(format!(
        "no accepted sample within {max_attempts} attempts"
    )))
}

fn ginibre_columns<R: Rng>(dim: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    (0..dim)
        .map(|_| (0..dim).map(|_| ginibre_entry(rng)).collect())
        .collect()
}

/// Modified Gram-Schmidt with one reorthogonalization pass; returns the
/// orthonormal columns and the R diagonal.
fn gram_schmidt(mut cols: Vec<Vec<Complex64>>) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let n = cols.len();
    let mut r_diag = vec![Complex64::ZERO; n];
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let (head, tail) = cols.split_at_mut(j);
                for (a, b) in head[k].iter().zip(tail[0].iter_mut()) {
                    *b -= proj * a;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // Ginibre columns are almost surely in general position; treat a
        // numerically dependent draw as irrecoverable here.
        assert!(norm > 1e-12, "rank-deficient Ginibre draw");
        r_diag[j] = Complex64::new(norm, 0.0);
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    (cols, r_diag)
}
