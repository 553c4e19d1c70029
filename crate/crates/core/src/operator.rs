//! Dense complex matrices, vectorization, matrix exponential and eigensolvers.
//!
//! Matrices are square and stored row-major. Operators are vectorized row by
//! row, `vec(|n><m|) = |n> (x) |m>*`, so that entry `(n, m)` lands at index
//! `n * dim + m` and `X rho Y` maps to `(X (x) Y^T) vec(rho)`. Every module
//! goes through [`vectorize`] / [`devectorize`] for this.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use faer::Mat;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tol;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; the length must be a perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::BadLength {
                expected: dim.max(1) * dim.max(1),
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::BadLength {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(data)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let values: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&values)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self + s * other`, in place.
    pub fn axpy(&mut self, s: C64, other: &Self) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in axpy");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|X_ij - conj(X_ji)|` with its location.
    pub fn hermiticity_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    /// Checks Hermiticity to `EPS_HERM` relative to `max(1, max|X_ij|)`.
    pub fn check_hermitian(&self, what: &'static str) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite(what));
        }
        let (defect, row, col) = self.hermiticity_defect();
        if defect > tol::EPS_HERM * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian {
                what,
                row,
                col,
                defect,
            });
        }
        Ok(())
    }

    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        self.matvec_into(v, &mut out);
        out
    }

    pub fn matvec_into(&self, v: &[C64], out: &mut [C64]) {
        assert_eq!(v.len(), self.dim, "dimension mismatch in matvec");
        assert_eq!(out.len(), self.dim, "dimension mismatch in matvec");
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            *o = row.iter().zip(v).map(|(&a, &b)| a * b).sum();
        }
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        let scale = self.max_abs();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == 0.0 || pivot <= f64::EPSILON * 1e-3 * scale {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                    b.swap(k * n + j, p * n + j);
                }
            }
            let inv = ONE / a[k * n + k];
            for i in (k + 1)..n {
                let f = a[i * n + k] * inv;
                if f == ZERO {
                    continue;
                }
                for j in k..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
                for j in 0..n {
                    let t = b[k * n + j];
                    b[i * n + j] -= f * t;
                }
            }
        }
        for k in (0..n).rev() {
            let inv = ONE / a[k * n + k];
            for j in 0..n {
                let mut s = b[k * n + j];
                for m in (k + 1)..n {
                    s -= a[k * n + m] * b[m * n + j];
                }
                b[k * n + j] = s * inv;
            }
        }
        Ok(Self { dim: n, data: b })
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.dim))
    }

    fn to_faer(&self) -> Mat<C64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }

    fn from_faer(m: faer::MatRef<'_, C64>) -> Self {
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    /// Singular values in non-increasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let mut s = self
            .to_faer()
            .singular_values()
            .map_err(|_| Error::EigNoConvergence { dim: self.dim })?;
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, data: out }
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.axpy(ONE, rhs);
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        self.axpy(-ONE, rhs);
    }
}

fn check_same_dim(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<()> {
    if x.dim != y.dim {
        return Err(Error::DimensionMismatch {
            left: x.dim,
            right: y.dim,
        });
    }
    Ok(())
}

/// `XY - YX`.
pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(x, y)?;
    Ok(&(x * y) - &(y * x))
}

/// `XY + YX`.
pub fn anticommutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(x, y)?;
    Ok(&(x * y) + &(y * x))
}

pub fn kron(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (x.dim, y.dim);
    ComplexMatrix::from_fn(n * m, |r, c| x[(r / m, c / m)] * y[(r % m, c % m)])
}

pub mod pauli {
    use super::{ComplexMatrix, C64, ONE, ZERO};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        let i = C64::new(0.0, 1.0);
        ComplexMatrix::from_rows(&[[ZERO, -i], [i, ZERO]]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::real_diag(&[1.0, -1.0])
    }
}

/// An operator flattened row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorizedOperator {
    dim: usize,
    data: Vec<C64>,
}

impl VectorizedOperator {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadLength {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Hilbert-Schmidt inner product `(X|Y) = Tr(X^† Y)`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `(1|X) = Tr X`.
    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }
}

pub fn vectorize(x: &ComplexMatrix) -> VectorizedOperator {
    VectorizedOperator {
        dim: x.dim,
        data: x.data.clone(),
    }
}

pub fn devectorize(v: &VectorizedOperator) -> ComplexMatrix {
    ComplexMatrix {
        dim: v.dim,
        data: v.data.clone(),
    }
}

/// Trace of a row-major vectorized operator of Hilbert dimension `dim`.
#[inline]
pub(crate) fn vec_trace(v: &[C64], dim: usize) -> C64 {
    (0..dim).map(|i| v[i * dim + i]).sum()
}

const PADE_THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn lincomb(terms: &[(f64, &ComplexMatrix)]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(terms[0].1.dim);
    for &(c, m) in terms {
        out.axpy(C64::new(c, 0.0), m);
    }
    out
}

/// Low-degree diagonal Padé approximant: returns (U, V) with r = (V - U)^{-1} (V + U).
fn pade_low(a: &ComplexMatrix, b: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim;
    let a2 = a * a;
    let mut powers = vec![ComplexMatrix::identity(n), a2.clone()];
    while powers.len() * 2 < b.len() {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u = ComplexMatrix::zeros(n);
    let mut v = ComplexMatrix::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        v.axpy(C64::new(b[2 * k], 0.0), p);
        if 2 * k + 1 < b.len() {
            u.axpy(C64::new(b[2 * k + 1], 0.0), p);
        }
    }
    (a * &u, v)
}

fn pade_13(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let b = &PADE_13;
    let n = a.dim;
    let id = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = lincomb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let mut u = &a6 * &inner_u;
    u += &lincomb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)]);
    let u = a * &u;
    let inner_v = lincomb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let mut v = &a6 * &inner_v;
    v += &lincomb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)]);
    (u, v)
}

/// Matrix exponential by scaling and squaring with a diagonal Padé core.
pub fn expm(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_finite() {
        return Err(Error::NonFinite("expm input"));
    }
    let norm = x.norm_one();
    let (u, v, squarings) = if let Some(&(m, _)) = PADE_THETA.iter().find(|(_, t)| norm <= *t) {
        let b: &[f64] = match m {
            3 => &PADE_3,
            5 => &PADE_5,
            7 => &PADE_7,
            _ => &PADE_9,
        };
        let (u, v) = pade_low(x, b);
        (u, v, 0)
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0);
        if !s.is_finite() || s > 1000.0 {
            return Err(Error::ExpmOverflow { norm });
        }
        let scaled = x.scale_real(0.5f64.powi(s as i32));
        let (u, v) = pade_13(&scaled);
        (u, v, s as u32)
    };
    let mut r = (&v - &u).solve(&(&v + &u)).map_err(|_| Error::ExpmOverflow { norm })?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::ExpmOverflow { norm });
    }
    Ok(r)
}

/// Right and left eigenvectors of a dense non-Hermitian matrix.
///
/// Right eigenvectors (columns of `right`) have unit 2-norm. Left
/// eigenvectors are the columns of `(V^{-1})^†`, so `left[:,k]^† right[:,j] = δ_kj`
/// and `left[:,k]^† X = λ_k left[:,k]^†`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub right: ComplexMatrix,
    pub left: ComplexMatrix,
    /// 2-norm condition number of the right eigenvector matrix.
    pub condition: f64,
}

impl Eigen {
    pub fn right_vector(&self, k: usize) -> Vec<C64> {
        (0..self.right.dim).map(|i| self.right[(i, k)]).collect()
    }

    pub fn left_vector(&self, k: usize) -> Vec<C64> {
        (0..self.left.dim).map(|i| self.left[(i, k)]).collect()
    }
}

pub fn eig(x: &ComplexMatrix) -> Result<Eigen> {
    if !x.is_finite() {
        return Err(Error::NonFinite("eig input"));
    }
    let n = x.dim;
    let evd = x
        .to_faer()
        .eigen()
        .map_err(|_| Error::EigNoConvergence { dim: n })?;
    let values: Vec<C64> = (0..n).map(|k| evd.S()[k]).collect();
    let mut right = ComplexMatrix::from_faer(evd.U());
    for k in 0..n {
        let norm = (0..n).map(|i| right[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..n {
                right[(i, k)] /= norm;
            }
        }
    }
    let sv = right.singular_values()?;
    let condition = if sv[n - 1] > 0.0 {
        sv[0] / sv[n - 1]
    } else {
        f64::INFINITY
    };
    let left = match right.inverse() {
        Ok(inv) => inv.adjoint(),
        Err(_) => return Err(Error::NearDefective { condition }),
    };
    let values = (0..n)
        .map(|k| refine_eigenvalue(x, values[k], &right, &left, k))
        .collect();
    Ok(Eigen {
        values,
        right,
        left,
        condition,
    })
}

/// Error-free `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Double-double accumulator.
#[derive(Clone, Copy, Default)]
struct Dd(f64, f64);

impl Dd {
    fn add(self, v: f64) -> Self {
        let (s, e) = two_sum(self.0, v);
        Dd(s, self.1 + e)
    }

    fn add_prod(self, a: f64, b: f64) -> Self {
        let p = a * b;
        let e = a.mul_add(b, -p);
        let d = self.add(p);
        Dd(d.0, d.1 + e)
    }

    fn value(self) -> f64 {
        self.0 + self.1
    }
}

/// Two-sided Rayleigh quotient `λ + y†(X - λ)x / y†x` with the residual
/// accumulated in double-double, which brings backward-stable eigenvalues
/// of well-conditioned pairs to within about an ulp.
fn refine_eigenvalue(x: &ComplexMatrix, lambda: C64, right: &ComplexMatrix, left: &ComplexMatrix, k: usize) -> C64 {
    let n = x.dim;
    let mut num = ZERO;
    let mut den = ZERO;
    for i in 0..n {
        let xi = right[(i, k)];
        let (mut re, mut im) = (Dd::default(), Dd::default());
        for j in 0..n {
            let (a, v) = (x[(i, j)], right[(j, k)]);
            re = re.add_prod(a.re, v.re).add_prod(-a.im, v.im);
            im = im.add_prod(a.re, v.im).add_prod(a.im, v.re);
        }
        re = re.add_prod(-lambda.re, xi.re).add_prod(lambda.im, xi.im);
        im = im.add_prod(-lambda.re, xi.im).add_prod(-lambda.im, xi.re);
        let yi = left[(i, k)].conj();
        num += yi * C64::new(re.value(), im.value());
        den += yi * xi;
    }
    let delta = num / den;
    if delta.re.is_finite() && delta.im.is_finite() && delta.norm() <= 1e-8 * (lambda.norm() + x.max_abs()) {
        lambda + delta
    } else {
        lambda
    }
}

/// Largest distance between two spectra after greedily pairing each value of
/// `a` with its nearest unused partner in `b`.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eig(x: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !x.is_finite() {
        return Err(Error::NonFinite("hermitian_eig input"));
    }
    let h = x.hermitian_part().to_faer();
    let evd = h
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::EigNoConvergence { dim: x.dim })?;
    let values: Vec<f64> = (0..x.dim).map(|k| evd.S()[k].re).collect();
    Ok((values, ComplexMatrix::from_faer(evd.U())))
}

pub fn min_hermitian_eigenvalue(x: &ComplexMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eig(x)?;
    Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
}

/// `f(X) = U f(Λ) U^†` for Hermitian `X`.
pub fn hermitian_function(x: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (vals, u) = hermitian_eig(x)?;
    let n = x.dim;
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| u[(i, k)] * f(vals[k]) * u[(j, k)].conj())
            .sum()
    }))
}
