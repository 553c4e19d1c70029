//! Generators of the form `-i[H, ρ] + {G, ρ} + Σ a_ij F_i ρ F_j^†` over an
//! orthonormal operator basis, and their diagonal representation.

use super::{left_mul, right_mul, sandwich, Superoperator};
use crate::error::{C64Display, Error, Result};
use crate::operator::{hermitian_eig, ComplexMatrix, C64};

const EPS_ORTHONORMAL: f64 = 1e-10;

/// Orthonormal Hermitian basis of `N × N` matrices: off-diagonal symmetric and
/// antisymmetric generators, traceless diagonals, and `1/sqrt(N)` last.
pub fn gell_mann_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(n * n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = ComplexMatrix::zeros(n);
            sym[(j, k)] = C64::new(s, 0.0);
            sym[(k, j)] = C64::new(s, 0.0);
            out.push(sym);
            let mut anti = ComplexMatrix::zeros(n);
            anti[(j, k)] = C64::new(0.0, -s);
            anti[(k, j)] = C64::new(0.0, s);
            out.push(anti);
        }
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut d = vec![0.0; n];
        d[..l].iter_mut().for_each(|x| *x = norm);
        d[l] = -(l as f64) * norm;
        out.push(ComplexMatrix::real_diag(&d));
    }
    out.push(ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt()));
    out
}

/// `(σx, σy, σz, 1) / sqrt(2)`.
pub fn pauli_basis() -> Vec<ComplexMatrix> {
    gell_mann_basis(2)
}

pub fn check_orthonormal(basis: &[ComplexMatrix]) -> Result<()> {
    for (i, fi) in basis.iter().enumerate() {
        for (j, fj) in basis.iter().enumerate().skip(i) {
            if fi.dim() != fj.dim() {
                return Err(Error::DimensionMismatch {
                    left: fi.dim(),
                    right: fj.dim(),
                });
            }
            let value: C64 = fi
                .as_slice()
                .iter()
                .zip(fj.as_slice())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let want = if i == j { 1.0 } else { 0.0 };
            if (value - want).norm() > EPS_ORTHONORMAL {
                return Err(Error::NonOrthonormalBasis {
                    i,
                    j,
                    value: C64Display(value),
                });
            }
        }
    }
    Ok(())
}

/// A generator in both the coefficient-matrix form and the diagonal form
/// `Σ_k γ_k A_k ρ A_k^†`.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub h: ComplexMatrix,
    pub g: ComplexMatrix,
    pub generator: Superoperator,
    pub rates: Vec<f64>,
    pub ops: Vec<ComplexMatrix>,
}

impl StandardForm {
    /// Superoperator rebuilt from the diagonal form.
    pub fn diagonal_generator(&self) -> Superoperator {
        let terms: Vec<(C64, &ComplexMatrix, &ComplexMatrix)> = self
            .rates
            .iter()
            .zip(&self.ops)
            .map(|(&r, a)| (C64::new(r, 0.0), a, a))
            .collect();
        assemble(&self.h, &self.g, &terms)
    }
}

fn assemble(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    terms: &[(C64, &ComplexMatrix, &ComplexMatrix)],
) -> Superoperator {
    let n = h.dim();
    let mut m = (&left_mul(h) - &right_mul(h)).scale(C64::new(0.0, -1.0));
    m += &left_mul(g);
    m += &right_mul(g);
    for &(c, x, y) in terms {
        if c != C64::new(0.0, 0.0) {
            m.axpy(c, &sandwich(x, &y.adjoint()));
        }
    }
    Superoperator { dim: n, matrix: m }
}

pub fn standard_form(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    a_coeffs: &ComplexMatrix,
    basis: &[ComplexMatrix],
) -> Result<StandardForm> {
    if a_coeffs.dim() != basis.len() {
        return Err(Error::DimensionMismatch {
            left: a_coeffs.dim(),
            right: basis.len(),
        });
    }
    for m in [g].into_iter().chain(basis) {
        if m.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                left: h.dim(),
                right: m.dim(),
            });
        }
    }
    check_orthonormal(basis)?;
    a_coeffs.check_hermitian("a_coeffs")?;

    let k = basis.len();
    let mut terms = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            terms.push((a_coeffs[(i, j)], &basis[i], &basis[j]));
        }
    }
    let generator = assemble(h, g, &terms);

    let off_diagonal_zero = (0..k).all(|i| (0..k).all(|j| i == j || a_coeffs[(i, j)].norm() == 0.0));
    let (rates, ops) = if off_diagonal_zero {
        ((0..k).map(|i| a_coeffs[(i, i)].re).collect(), basis.to_vec())
    } else {
        let (vals, v) = hermitian_eig(a_coeffs)?;
        let ops = (0..k)
            .map(|col| {
                let mut a = ComplexMatrix::zeros(h.dim());
                for (i, f) in basis.iter().enumerate() {
                    a.axpy(v[(i, col)], f);
                }
                a
            })
            .collect();
        (vals, ops)
    };
    Ok(StandardForm {
        h: h.clone(),
        g: g.clone(),
        generator,
        rates,
        ops,
    })
}

/// `G = -1/2 Σ a_ij F_j^† F_i`, the choice that makes the generator trace preserving.
pub fn gksl_g(a_coeffs: &ComplexMatrix, basis: &[ComplexMatrix]) -> ComplexMatrix {
    let n = basis[0].dim();
    let mut g = ComplexMatrix::zeros(n);
    for (i, fi) in basis.iter().enumerate() {
        for (j, fj) in basis.iter().enumerate() {
            let c = a_coeffs[(i, j)];
            if c != C64::new(0.0, 0.0) {
                g.axpy(-0.5 * c, &(&fj.adjoint() * fi));
            }
        }
    }
    g
}

/// Components of a superoperator in a full orthonormal basis whose last
/// element is `1/sqrt(N)`.
#[derive(Clone, Debug)]
pub struct Projection {
    pub h: ComplexMatrix,
    pub g: ComplexMatrix,
    /// Coefficients over the traceless part of the basis.
    pub a_coeffs: ComplexMatrix,
    pub ops: Vec<ComplexMatrix>,
}

pub fn project(sop: &Superoperator, basis: &[ComplexMatrix]) -> Result<Projection> {
    let n = sop.dim();
    let nn = n * n;
    if basis.len() != nn {
        return Err(Error::BadLength {
            expected: nn,
            got: basis.len(),
        });
    }
    check_orthonormal(basis)?;
    let unit = ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt());
    if (&basis[nn - 1] - &unit).max_abs() > EPS_ORTHONORMAL {
        return Err(Error::InvalidParameter {
            name: "basis",
            reason: "last basis element must be 1/sqrt(N)".into(),
        });
    }

    // c_ij = <F_i ⊗ conj(F_j), L̃> in the Hilbert-Schmidt product on superoperators.
    let elems: Vec<ComplexMatrix> = basis.iter().map(|f| f.conj()).collect();
    let mut c = ComplexMatrix::zeros(nn);
    for i in 0..nn {
        for j in 0..nn {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..nn {
                let (ri, rj) = (r / n, r % n);
                for s in 0..nn {
                    let (si, sj) = (s / n, s % n);
                    let sup = basis[i][(ri, si)] * elems[j][(rj, sj)];
                    acc += sup.conj() * sop.matrix()[(r, s)];
                }
            }
            c[(i, j)] = acc;
        }
    }

    let last = nn - 1;
    let root_n = (n as f64).sqrt();
    let mut f = ComplexMatrix::zeros(n);
    for (i, fi) in basis.iter().enumerate().take(last) {
        f.axpy(c[(i, last)] / root_n, fi);
    }
    let fd = f.adjoint();
    let h = (&f - &fd).scale(C64::new(0.0, 0.5));
    let mut g = (&f + &fd).scale_real(0.5);
    for i in 0..n {
        g[(i, i)] += c[(last, last)] / (2.0 * n as f64);
    }
    let a_coeffs = ComplexMatrix::from_fn(last, |i, j| c[(i, j)]);
    Ok(Projection {
        h,
        g,
        a_coeffs,
        ops: basis[..last].to_vec(),
    })
}
