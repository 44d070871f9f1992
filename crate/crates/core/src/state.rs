//! Normalized state vectors on C^d.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::consts::STATE_NORM_TOL;
use crate::error::{Error, Result};

/// A unit vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized within
    /// [`STATE_NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm = norm2(&amplitudes);
        let defect = (norm - 1.0).abs();
        if defect > STATE_NORM_TOL {
            return Err(Error::NotNormalized(defect));
        }
        Ok(Self { amplitudes })
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = norm2(&amplitudes);
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::NumericalFailure(format!(
                "cannot normalize vector of norm {norm:.3e}"
            )));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    /// Computational basis state |k⟩.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[k] = Complex64::ONE;
        Ok(Self { amplitudes })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Kronecker product |self⟩ ⊗ |other⟩.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }
}

/// Fourier basis state |l̄⟩ = (1/√d) Σ_k ω^{kl} |k⟩ with ω = e^{2πi/d}.
pub fn fourier_state(dim: usize, l: usize) -> Result<StateVector> {
    if l >= dim {
        return Err(Error::IndexOutOfRange { index: l, dim });
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let amplitudes = (0..dim)
        .map(|k| Complex64::from_polar(scale, TAU * (k * l) as f64 / dim as f64))
        .collect();
    StateVector::new(amplitudes)
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
