//! Stochastic non-Hermitian Hamiltonian `H_t = H0 - i(L_d + a) - i sqrt(2γ) ξ_t (L_s + b)`.

use crate::error::{Error, Result};
use crate::operator::{anticommutator, commutator, min_hermitian_eigenvalue, ComplexMatrix, C64};
use crate::state::DensityMatrix;
use crate::tol;

/// Model data. `l_det` and `l_stoch` are stored as given at construction;
/// the gauge offsets `a` and `b` are kept separately and folded in by
/// [`StochNhModel::effective_l_det`] and [`StochNhModel::effective_l_stoch`].
#[derive(Clone, Debug, PartialEq)]
pub struct StochNhModel {
    h0: ComplexMatrix,
    l_det: ComplexMatrix,
    l_stoch: ComplexMatrix,
    gamma: f64,
    offset_a: f64,
    offset_b: f64,
}

impl StochNhModel {
    /// `H_t = H0 - i(1 + sqrt(2γ) ξ_t) L` with `L >= 0`.
    pub fn build(h0: ComplexMatrix, l: ComplexMatrix, gamma: f64) -> Result<Self> {
        let model = Self::with_parts(h0, l.clone(), l, gamma)?;
        let min = min_hermitian_eigenvalue(&model.l_det)?;
        if min < -tol::EPS_POSITIVE {
            return Err(Error::NotPositive {
                what: "L",
                min_eigenvalue: min,
            });
        }
        Ok(model)
    }

    /// Separate deterministic and stochastic anti-Hermitian parts; no positivity requirement.
    pub fn with_parts(
        h0: ComplexMatrix,
        l_det: ComplexMatrix,
        l_stoch: ComplexMatrix,
        gamma: f64,
    ) -> Result<Self> {
        let n = h0.dim();
        for m in [&l_det, &l_stoch] {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: m.dim(),
                });
            }
        }
        h0.check_hermitian("H0")?;
        l_det.check_hermitian("L_d")?;
        l_stoch.check_hermitian("L_s")?;
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("noise strength must be finite and >= 0, got {gamma}"),
            });
        }
        Ok(Self {
            h0,
            l_det,
            l_stoch,
            gamma,
            offset_a: 0.0,
            offset_b: 0.0,
        })
    }

    /// Sets both offsets at once, as read from a model descriptor.
    pub fn with_offsets(mut self, offset_a: f64, offset_b: f64) -> Result<Self> {
        if !offset_a.is_finite() || !offset_b.is_finite() {
            return Err(Error::InvalidParameter {
                name: "offset",
                reason: "gauge offsets must be finite".into(),
            });
        }
        self.offset_a = offset_a;
        self.offset_b = offset_b;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn h0(&self) -> &ComplexMatrix {
        &self.h0
    }

    pub fn l_det(&self) -> &ComplexMatrix {
        &self.l_det
    }

    pub fn l_stoch(&self) -> &ComplexMatrix {
        &self.l_stoch
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn offset_a(&self) -> f64 {
        self.offset_a
    }

    pub fn offset_b(&self) -> f64 {
        self.offset_b
    }

    /// `L_d + 4γ b L_s` (the identity offset `a` is not included).
    pub fn effective_l_det(&self) -> ComplexMatrix {
        let mut l = self.l_det.clone();
        if self.offset_b != 0.0 {
            l.axpy(C64::new(4.0 * self.gamma * self.offset_b, 0.0), &self.l_stoch);
        }
        l
    }

    /// `L_s + b 1`.
    pub fn effective_l_stoch(&self) -> ComplexMatrix {
        let mut l = self.l_stoch.clone();
        if self.offset_b != 0.0 {
            for i in 0..self.dim() {
                l[(i, i)] += self.offset_b;
            }
        }
        l
    }

    /// Imaginary identity offset `H0 - i(L + a)`; leaves normalized dynamics unchanged.
    pub fn gauge_shift_identity(&self, a: f64) -> Self {
        Self {
            offset_a: self.offset_a + a,
            ..self.clone()
        }
    }

    /// `L_s -> L_s + b 1`, `L_d -> L_d + 4γ b L_s`.
    ///
    /// Shifts accumulate in `offset_b` and are always taken relative to the
    /// stored `L_s`, so `shift(b)` followed by `shift(-b)` restores the model exactly.
    pub fn gauge_shift_stochastic(&self, b: f64) -> Self {
        Self {
            offset_b: self.offset_b + b,
            ..self.clone()
        }
    }

    /// Deterministic part of the propagator exponent, `-i H0 - (L_d + a)`.
    pub fn drift_generator(&self) -> ComplexMatrix {
        let mut g = self.h0.scale(C64::new(0.0, -1.0));
        g -= &self.effective_l_det();
        for i in 0..self.dim() {
            g[(i, i)] -= self.offset_a;
        }
        g
    }

    /// Noise-averaged generator applied directly:
    /// `-i[H0, ρ] - {L_d + a, ρ} + γ {L_s, {L_s, ρ}}`.
    pub fn apply_liouvillian(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let ld = self.effective_l_det();
        let ls = self.effective_l_stoch();
        let mut out = commutator(&self.h0, rho)?.scale(C64::new(0.0, -1.0));
        out -= &anticommutator(&ld, rho)?;
        out.axpy(C64::new(-2.0 * self.offset_a, 0.0), rho);
        let inner = anticommutator(&ls, rho)?;
        out.axpy(C64::new(self.gamma, 0.0), &anticommutator(&ls, &inner)?);
        Ok(out)
    }

    /// Right-hand side of the nonlinear trace-preserving master equation.
    pub fn nonlinear_rhs(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut l = self.apply_liouvillian(rho)?;
        let tr = l.trace();
        l.axpy(-tr, rho);
        Ok(l)
    }

    /// `Tr(L̃[ρ]) = -2 Tr((L_d + a) ρ) + 4γ Tr(L_s² ρ)`.
    pub fn trace_rate(&self, rho: &DensityMatrix) -> f64 {
        let rho = rho.matrix();
        let ld = self.effective_l_det();
        let ls = self.effective_l_stoch();
        let ls2 = &ls * &ls;
        let tr_ld = (&ld * rho).trace().re;
        let tr_ls2 = (&ls2 * rho).trace().re;
        -2.0 * tr_ld - 2.0 * self.offset_a * rho.trace().re + 4.0 * self.gamma * tr_ls2
    }
}
