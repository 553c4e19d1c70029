//! Purity, its exact rate, decoherence time, Uhlmann fidelity and the
//! parameter sweeps built on them.

pub mod sweep;

use crate::error::{Error, Result};
use crate::model::StochNhModel;
use crate::operator::{hermitian_eig, hermitian_function, ComplexMatrix};
use crate::tol;

fn tr_prod(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// `Tr ρ²`.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    tr_prod(rho, rho)
}

/// `Tr(L²ρ) - Tr(Lρ)²`.
pub fn variance(l: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    let l2 = l * l;
    let m = tr_prod(l, rho);
    tr_prod(&l2, rho) - m * m
}

/// Exact purity rate of the normalized dynamics,
/// `-4Tr(Lρ²) + 4γ(Tr(L²ρ²) + Tr(LρLρ)) + 4Tr(Lρ)P - 8γTr(L²ρ)P`,
/// generalized to distinct deterministic and stochastic parts.
///
/// Identity offsets drop out of the normalized dynamics and are ignored.
pub fn purity_rate(rho: &ComplexMatrix, m: &StochNhModel) -> f64 {
    let ld = m.effective_l_det();
    let ls = m.effective_l_stoch();
    let g = m.gamma();
    let ls2 = &ls * &ls;
    let rho2 = rho * rho;
    let p = tr_prod(rho, rho);
    let lsr = &ls * rho;
    -4.0 * tr_prod(&ld, &rho2)
        + 4.0 * g * (tr_prod(&ls2, &rho2) + tr_prod(&lsr, &lsr))
        + 4.0 * tr_prod(&ld, rho) * p
        - 8.0 * g * tr_prod(&ls2, rho) * p
}

/// `1 / Ṗ(0)`; `+∞` when the initial purity rate vanishes.
pub fn decoherence_time(rho0: &ComplexMatrix, m: &StochNhModel) -> f64 {
    let rate = purity_rate(rho0, m);
    if rate.abs() <= tol::EPS_RATE_ZERO {
        f64::INFINITY
    } else {
        1.0 / rate
    }
}

fn psd_sqrt(x: &ComplexMatrix, what: &'static str) -> Result<ComplexMatrix> {
    let (vals, _) = hermitian_eig(x)?;
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol::EPS_PHYSICAL {
        return Err(Error::NotPositive {
            what,
            min_eigenvalue: min,
        });
    }
    hermitian_function(x, |v| v.max(0.0).sqrt())
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(ρ) σ sqrt(ρ)))²`.
pub fn fidelity_general(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let s = psd_sqrt(rho, "rho")?;
    psd_sqrt(sigma, "sigma")?;
    let inner = &(&s * sigma) * &s;
    let (vals, _) = hermitian_eig(&inner)?;
    let t: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok(t * t)
}

fn det2(x: &ComplexMatrix) -> f64 {
    (x[(0, 0)] * x[(1, 1)] - x[(0, 1)] * x[(1, 0)]).re
}

/// Qubit closed form `Tr(ρσ) + 2 sqrt(det ρ det σ)`.
pub fn fidelity_qubit(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    for x in [rho, sigma] {
        if x.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: 2,
                right: x.dim(),
            });
        }
    }
    let clip = |d: f64, what| {
        if d < -tol::EPS_DET_CLIP {
            Err(Error::NotPositive {
                what,
                min_eigenvalue: d,
            })
        } else {
            Ok(d.max(0.0))
        }
    };
    let dr = clip(det2(rho), "rho")?;
    let ds = clip(det2(sigma), "sigma")?;
    Ok(tr_prod(rho, sigma) + 2.0 * (dr * ds).sqrt())
}
