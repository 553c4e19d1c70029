//! Density matrices, normalized or not.

use crate::error::{Error, Result};
use crate::operator::{min_hermitian_eigenvalue, ComplexMatrix, C64};
use crate::tol;

/// A Hermitian density matrix.
///
/// The same type carries normalized states and the unnormalized states
/// produced by non-trace-preserving evolution; [`DensityMatrix::new`] checks
/// unit trace and positivity, [`DensityMatrix::unnormalized`] only Hermiticity.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validated physical state: Hermitian, unit trace, positive semidefinite.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.check_hermitian("density matrix")?;
        let tr = m.trace();
        if (tr - 1.0).norm() > tol::EPS_TRACE {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = min_hermitian_eigenvalue(&m)?;
        if min < -tol::EPS_PHYSICAL {
            return Err(Error::NotPositive {
                what: "density matrix",
                min_eigenvalue: min,
            });
        }
        Ok(Self(m))
    }

    pub fn unnormalized(m: ComplexMatrix) -> Result<Self> {
        m.check_hermitian("density matrix")?;
        Ok(Self(m))
    }

    /// Wraps a matrix without any checks.
    pub fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        Ok(Self(ComplexMatrix::from_fn(psi.len(), |i, j| {
            psi[i] * psi[j].conj() / norm
        })))
    }

    /// `|k><k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Qubit state `(1 + r·σ)/2`; requires `|r| <= 1 + 1e-9`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if !r.is_finite() || r > 1.0 + 1e-9 {
            return Err(Error::InvalidState(format!("Bloch radius {r} exceeds 1")));
        }
        let h = 0.5;
        Ok(Self(
            ComplexMatrix::from_rows(&[
                [C64::new(h * (1.0 + z), 0.0), C64::new(h * x, -h * y)],
                [C64::new(h * x, h * y), C64::new(h * (1.0 - z), 0.0)],
            ])
            .expect("2x2"),
        ))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::UnphysicalTrace { step: 0, trace: tr });
        }
        Ok(Self(self.0.scale_real(1.0 / tr)))
    }

    pub fn population(&self, k: usize) -> f64 {
        self.0[(k, k)].re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_hermitian_eigenvalue(&self.0)
    }

    /// Bloch vector `(x, y, z)` of a qubit state, computed from the normalized matrix.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: 2,
            });
        }
        let m = &self.0;
        let tr = m.trace().re;
        Ok([
            2.0 * m[(1, 0)].re / tr,
            2.0 * m[(1, 0)].im / tr,
            (m[(0, 0)].re - m[(1, 1)].re) / tr,
        ])
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::pauli;

    #[test]
    fn bloch_round_trip() {
        let rho = DensityMatrix::from_bloch(0.2, 0.8, 0.4).unwrap();
        let b = rho.bloch().unwrap();
        assert!((b[0] - 0.2).abs() < 1e-15 && (b[1] - 0.8).abs() < 1e-15 && (b[2] - 0.4).abs() < 1e-15);
        // same matrix through the Pauli expansion
        let want = &(&ComplexMatrix::identity(2)
            + &(&(&pauli::x().scale_real(0.2) + &pauli::y().scale_real(0.8))
                + &pauli::z().scale_real(0.4)))
            .scale_real(0.5)
            - rho.matrix();
        assert!(want.max_abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_states() {
        assert!(DensityMatrix::from_bloch(1.0, 1.0, 0.0).is_err());
        let neg = ComplexMatrix::real_diag(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPositive { .. })));
        let bad_trace = ComplexMatrix::real_diag(&[0.5, 0.3]);
        assert!(DensityMatrix::new(bad_trace.clone()).is_err());
        assert!(DensityMatrix::unnormalized(bad_trace).is_ok());
        let mut non_herm = ComplexMatrix::real_diag(&[0.5, 0.5]);
        non_herm[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(non_herm), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn pure_state_is_normalized() {
        let rho = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        let b = rho.bloch().unwrap();
        assert!((b[1] - 1.0).abs() < 1e-15);
    }
}
