//! Unitarity certification and operator application.

use num_complex::Complex64;

use crate::consts::{COMPOSED_UNITARY_TOL, UNITARY_TOL};
use crate::error::{Error, Result};
use crate::matrix::ComplexSquareMatrix;
use crate::state::StateVector;

/// A square matrix certified unitary: the Frobenius defect `‖M†M − I‖_F`
/// was measured at construction and is carried along.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexSquareMatrix,
    defect: f64,
}

/// Certifies `m` as unitary within `tol`, recording the measured defect.
pub fn certify_unitary(m: ComplexSquareMatrix, tol: f64) -> Result<UnitaryOperator> {
    let defect = m.unitarity_defect();
    if defect > tol {
        return Err(Error::NotUnitary { defect, tol });
    }
    Ok(UnitaryOperator { matrix: m, defect })
}

impl UnitaryOperator {
    /// Certification at the default tolerance [`UNITARY_TOL`].
    pub fn new(m: ComplexSquareMatrix) -> Result<Self> {
        certify_unitary(m, UNITARY_TOL)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexSquareMatrix::identity(dim),
            defect: 0.0,
        }
    }

    /// Diagonal unitary from unit-modulus phases e^{iθ_k}.
    pub fn from_phases(phases: &[f64]) -> Self {
        let entries: Vec<Complex64> = phases
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect();
        Self {
            matrix: ComplexSquareMatrix::diagonal(&entries),
            defect: 0.0,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexSquareMatrix {
        &self.matrix
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// Adjoint, unitary with the same defect.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            defect: self.defect,
        }
    }

    /// Product of two certified unitaries, re-certified at the composed
    /// tolerance.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        certify_unitary(self.matrix.mul(&other.matrix)?, COMPOSED_UNITARY_TOL)
    }

    /// Kronecker product of certified unitaries.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        certify_unitary(self.matrix.tensor(&other.matrix), COMPOSED_UNITARY_TOL)
    }

    /// Global phase multiplication e^{iφ}·U.
    pub fn phase_shifted(&self, phi: f64) -> Self {
        Self {
            matrix: self.matrix.scale(Complex64::from_polar(1.0, phi)),
            defect: self.defect,
        }
    }

    /// Applies the operator to a state; the result stays normalized.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        let out = self.matrix.apply_vec(psi.amplitudes())?;
        StateVector::new(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::haar_unitary_seeded;
    use crate::haar::random_state;
    use crate::exec::stream_rng;

    #[test]
    fn identity_certifies_with_zero_defect() {
        let u = certify_unitary(ComplexSquareMatrix::identity(3), 1e-9).unwrap();
        assert_eq!(u.defect(), 0.0);
    }

    #[test]
    fn scaled_identity_is_rejected_with_frobenius_defect() {
        let m = ComplexSquareMatrix::identity(2).scale(Complex64::new(2.0, 0.0));
        match certify_unitary(m, 1e-9) {
            Err(Error::NotUnitary { defect, .. }) => {
                assert!((defect - 3.0 * 2.0_f64.sqrt()).abs() <= 1e-12);
            }
            other => panic!("expected NotUnitary, got {other:?}"),
        }
    }

    #[test]
    fn qr_orthonormalized_gaussian_certifies() {
        for seed in 0..16 {
            let u = haar_unitary_seeded(4, 7, seed);
            assert!(u.defect() <= 1e-12);
        }
    }

    /// Norm preservation across many random states.
    #[test]
    fn apply_preserves_norm() {
        let u = haar_unitary_seeded(4, 11, 0);
        for t in 0..1000 {
            let psi = random_state(4, &mut stream_rng(13, t));
            let out = u.apply(&psi).unwrap();
            let norm: f64 = out
                .amplitudes()
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!((norm - 1.0).abs() <= 1e-10);
        }
    }
}
