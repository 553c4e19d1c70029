//! Vectorized Liouvillian, its spectral decomposition and the steady state.

pub mod standard_form;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::StochNhModel;
use crate::operator::{eig, kron, min_hermitian_eigenvalue, ComplexMatrix, C64};
use crate::state::DensityMatrix;
use crate::tol;

/// `ρ ↦ X ρ Y` as a matrix acting on row-major `vec ρ`.
pub fn sandwich(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    kron(x, &y.transpose())
}

/// `ρ ↦ X ρ`.
pub fn left_mul(x: &ComplexMatrix) -> ComplexMatrix {
    kron(x, &ComplexMatrix::identity(x.dim()))
}

/// `ρ ↦ ρ Y`.
pub fn right_mul(y: &ComplexMatrix) -> ComplexMatrix {
    kron(&ComplexMatrix::identity(y.dim()), &y.transpose())
}

/// A linear map on operators of Hilbert dimension `dim`, stored as a `dim² × dim²` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: matrix.dim(),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.matvec(v)
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rho.dim(),
            });
        }
        ComplexMatrix::from_row_major(self.matrix.matvec(rho.as_slice()))
    }
}

/// Noise-averaged generator of a model in vectorized form.
pub fn build_liouvillian(m: &StochNhModel) -> Superoperator {
    let n = m.dim();
    let id = ComplexMatrix::identity(n);
    let mut ld = m.effective_l_det();
    for i in 0..n {
        ld[(i, i)] += m.offset_a();
    }
    let ls = m.effective_l_stoch();
    let ls2 = &ls * &ls;
    let h = m.h0();

    let mut out = (&kron(h, &id) - &kron(&id, &h.transpose())).scale(C64::new(0.0, -1.0));
    out -= &kron(&ld, &id);
    out -= &kron(&id, &ld.transpose());
    let g = C64::new(m.gamma(), 0.0);
    out.axpy(g, &kron(&ls2, &id));
    out.axpy(g, &kron(&id, &ls2.transpose()));
    out.axpy(2.0 * g, &kron(&ls, &ls.transpose()));
    Superoperator { dim: n, matrix: out }
}

/// Multiplicative noise superoperator `ρ ↦ -sqrt(2γ) {L_s, ρ}` of the Itô equation.
pub fn noise_superoperator(m: &StochNhModel) -> Superoperator {
    let ls = m.effective_l_stoch();
    let mut s = left_mul(&ls);
    s += &right_mul(&ls);
    Superoperator {
        dim: m.dim(),
        matrix: s.scale_real(-(2.0 * m.gamma()).sqrt()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EigenClass {
    /// Unit trace, Hermitian and positive semidefinite.
    Physical,
    /// Unit trace but not a density matrix.
    Traceful,
    Traceless,
}

impl EigenClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EigenClass::Physical => "physical",
            EigenClass::Traceful => "traceful",
            EigenClass::Traceless => "traceless",
        }
    }
}

/// Eigen-decomposition of a Liouvillian, sorted physical, traceful, traceless
/// and by decreasing real part within each block.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<C64>,
    pub right_ops: Vec<ComplexMatrix>,
    pub left_ops: Vec<ComplexMatrix>,
    pub classes: Vec<EigenClass>,
    /// `order[k]` is the index of the k-th sorted eigenpair in the raw eigensolver output.
    pub order: Vec<usize>,
    /// `Re λ0 - max_{ν≥1} Re λν`.
    pub gap: f64,
    /// Condition number of the eigenvector matrix.
    pub condition: f64,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.im).collect()
    }

    pub fn omega_max(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.im)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Σ_ν c_ν e^{λ_ν t} σ_ν`, the unnormalized state at time `t`.
    pub fn propagate(&self, coeffs: &[C64], t: f64) -> ComplexMatrix {
        let n = self.right_ops[0].dim();
        let mut out = ComplexMatrix::zeros(n);
        for ((c, l), op) in coeffs.iter().zip(&self.eigenvalues).zip(&self.right_ops) {
            out.axpy(c * (l * t).exp(), op);
        }
        out
    }
}

fn classify(op: &ComplexMatrix) -> Result<(EigenClass, ComplexMatrix)> {
    let tr = op.trace();
    if tr.norm() <= tol::EPS_TRACELESS {
        return Ok((EigenClass::Traceless, op.clone()));
    }
    let scaled = op.scale(1.0 / tr);
    let (defect, _, _) = scaled.hermiticity_defect();
    if defect <= tol::EPS_PHYSICAL * scaled.max_abs().max(1.0)
        && min_hermitian_eigenvalue(&scaled)? >= -tol::EPS_PHYSICAL
    {
        Ok((EigenClass::Physical, scaled))
    } else {
        Ok((EigenClass::Traceful, scaled))
    }
}

fn column_op(m: &ComplexMatrix, k: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| m[(i * n + j, k)])
}

pub fn decompose(sop: &Superoperator) -> Result<SpectralDecomposition> {
    let n = sop.dim();
    let e = eig(sop.matrix())?;
    if !(e.condition <= tol::MAX_EIGVEC_CONDITION) {
        return Err(Error::NearDefective {
            condition: e.condition,
        });
    }
    let n2 = n * n;
    let mut entries = Vec::with_capacity(n2);
    for k in 0..n2 {
        let (class, right) = classify(&column_op(&e.right, k, n))?;
        entries.push((k, class, right, column_op(&e.left, k, n)));
    }
    entries.sort_by(|a, b| {
        let (la, lb) = (e.values[a.0], e.values[b.0]);
        a.1.cmp(&b.1)
            .then(lb.re.partial_cmp(&la.re).unwrap_or(Ordering::Equal))
            .then(lb.im.partial_cmp(&la.im).unwrap_or(Ordering::Equal))
    });

    let mut out = SpectralDecomposition {
        eigenvalues: Vec::with_capacity(n2),
        right_ops: Vec::with_capacity(n2),
        left_ops: Vec::with_capacity(n2),
        classes: Vec::with_capacity(n2),
        order: Vec::with_capacity(n2),
        gap: 0.0,
        condition: e.condition,
    };
    for (k, class, right, left) in entries {
        out.eigenvalues.push(e.values[k]);
        out.right_ops.push(right);
        out.left_ops.push(left);
        out.classes.push(class);
        out.order.push(k);
    }
    if n2 > 1 {
        let second = out.eigenvalues[1..]
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max);
        out.gap = out.eigenvalues[0].re - second;
    }
    Ok(out)
}

/// Hilbert-Schmidt pairing `Tr(X^† Y)`.
fn hs(x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    x.as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// `c_ν = Tr(σ_ν^(l)† ρ0) / Tr(σ_ν^(l)† σ_ν)`.
pub fn expansion_coefficients(
    dec: &SpectralDecomposition,
    rho0: &ComplexMatrix,
) -> Result<Vec<C64>> {
    dec.left_ops
        .iter()
        .zip(&dec.right_ops)
        .enumerate()
        .map(|(index, (l, r))| {
            let pairing = hs(l, r);
            if pairing.norm() < tol::EPS_PAIRING {
                return Err(Error::DegeneratePairing {
                    index,
                    overlap: pairing.norm(),
                });
            }
            Ok(hs(l, rho0) / pairing)
        })
        .collect()
}

/// Long-time limit of the normalized evolution.
#[derive(Clone, Debug)]
pub enum SteadyState {
    /// A single real eigenvalue dominates the initial support.
    Unique(DensityMatrix),
    /// Several modes share the leading real part, or the leading mode oscillates
    /// or cannot be normalized; the state keeps moving within this set.
    NonConvergent {
        modes: Vec<usize>,
        eigenvalues: Vec<C64>,
        coefficients: Vec<C64>,
    },
}

impl SteadyState {
    pub fn unique(&self) -> Option<&DensityMatrix> {
        match self {
            SteadyState::Unique(rho) => Some(rho),
            SteadyState::NonConvergent { .. } => None,
        }
    }
}

pub fn steady_state(dec: &SpectralDecomposition, rho0: &ComplexMatrix) -> Result<SteadyState> {
    let coeffs = expansion_coefficients(dec, rho0)?;
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let support: Vec<usize> = (0..coeffs.len())
        .filter(|&k| coeffs[k].norm() > tol::EPS_SUPPORT * cmax)
        .collect();
    let lead = support
        .iter()
        .map(|&k| dec.eigenvalues[k].re)
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = lead.abs().max(1.0);
    let modes: Vec<usize> = support
        .into_iter()
        .filter(|&k| (dec.eigenvalues[k].re - lead).abs() < tol::EPS_DEGENERATE * scale)
        .collect();
    if let [k] = modes[..] {
        let lambda = dec.eigenvalues[k];
        if lambda.im.abs() < tol::EPS_DEGENERATE * lambda.norm().max(1.0)
            && dec.classes[k] != EigenClass::Traceless
        {
            let sigma = dec.right_ops[k].hermitian_part();
            return Ok(SteadyState::Unique(DensityMatrix::from_matrix_unchecked(sigma)));
        }
    }
    Ok(SteadyState::NonConvergent {
        eigenvalues: modes.iter().map(|&k| dec.eigenvalues[k]).collect(),
        coefficients: modes.iter().map(|&k| coeffs[k]).collect(),
        modes,
    })
}
