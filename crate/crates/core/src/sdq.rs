//! The stochastic dissipative qubit: `H_t = J σx - i(1 + sqrt(2γ) ξ_t) Γ Π` with
//! `Π = |e><e|`. Basis index 0 is `|f>` and index 1 is `|e>`, so Bloch `z = +1` is `|f>`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::liouvillian::{build_liouvillian, left_mul, right_mul, sandwich, Superoperator};
use crate::model::StochNhModel;
use crate::operator::{pauli, ComplexMatrix, C64};
use crate::state::DensityMatrix;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdqParams {
    pub j: f64,
    pub gamma_decay: f64,
    pub gamma_noise: f64,
}

impl SdqParams {
    pub fn new(j: f64, gamma_decay: f64, gamma_noise: f64) -> Result<Self> {
        if !(j > 0.0) || !j.is_finite() {
            return Err(Error::InvalidParameter {
                name: "J",
                reason: format!("hopping must be finite and > 0, got {j}"),
            });
        }
        for (name, v) in [("Gamma", gamma_decay), ("gamma", gamma_noise)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and >= 0, got {v}"),
                });
            }
        }
        Ok(Self {
            j,
            gamma_decay,
            gamma_noise,
        })
    }

    /// `A = (Γ/J)(γΓ - 1)`.
    pub fn a_const(&self) -> f64 {
        (self.gamma_decay / self.j) * (self.gamma_noise * self.gamma_decay - 1.0)
    }

    /// `B = 2(Γ/J)(2γΓ - 1)`.
    pub fn b_const(&self) -> f64 {
        2.0 * (self.gamma_decay / self.j) * (2.0 * self.gamma_noise * self.gamma_decay - 1.0)
    }

    /// `γΓ`.
    pub fn noise_product(&self) -> f64 {
        self.gamma_noise * self.gamma_decay
    }

    pub fn model(&self) -> StochNhModel {
        StochNhModel::build(
            pauli::x().scale_real(self.j),
            ComplexMatrix::real_diag(&[0.0, self.gamma_decay]),
            self.gamma_noise,
        )
        .expect("validated qubit parameters")
    }

    pub fn liouvillian(&self) -> Superoperator {
        build_liouvillian(&self.model())
    }

    pub fn phase(&self) -> Phase {
        phase(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    PtUnbroken,
    PtBroken,
    NoiseInduced,
    /// `Γ/J = 2` with `γ < 1/(2Γ)`.
    PtBoundary,
    /// `γ = 1/(2Γ)`, where the averaged dynamics is trace preserving.
    NoiseBoundary,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::PtUnbroken => "PTu",
            Phase::PtBroken => "PTb",
            Phase::NoiseInduced => "NI",
            Phase::PtBoundary => "PT-boundary",
            Phase::NoiseBoundary => "NI-boundary",
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, Phase::PtBoundary | Phase::NoiseBoundary)
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn phase(p: &SdqParams) -> Phase {
    let x = 2.0 * p.noise_product();
    if (x - 1.0).abs() <= tol::EPS_PHASE_BOUNDARY {
        return Phase::NoiseBoundary;
    }
    if x > 1.0 {
        return Phase::NoiseInduced;
    }
    let ratio = p.gamma_decay / p.j;
    if (ratio - 2.0).abs() <= 2.0 * tol::EPS_PHASE_BOUNDARY {
        Phase::PtBoundary
    } else if ratio < 2.0 {
        Phase::PtUnbroken
    } else {
        Phase::PtBroken
    }
}

/// Characteristic cubic `f(Λ) = Λ³ - Λ²(A+B) + Λ(4+AB) - 2B` in units of `J`.
pub fn characteristic_cubic(p: &SdqParams, lambda: C64) -> C64 {
    let (a, b) = (p.a_const(), p.b_const());
    lambda * lambda * lambda - lambda * lambda * (a + b) + lambda * (4.0 + a * b) - 2.0 * b
}

fn cubic_derivative(p: &SdqParams, lambda: C64) -> C64 {
    let (a, b) = (p.a_const(), p.b_const());
    3.0 * lambda * lambda - 2.0 * lambda * (a + b) + (4.0 + a * b)
}

struct Vieta {
    s: f64,
    c: f64,
    v_plus: C64,
    v_minus: C64,
}

fn vieta(p: &SdqParams) -> Vieta {
    let (a, b) = (p.a_const(), p.b_const());
    let s = (a + b) / 3.0;
    let c = -s * s + (4.0 + a * b) / 3.0;
    let d = s * (4.0 + a * b) - 2.0 * b - 2.0 * s * s * s;
    let disc = C64::new(d * d + 4.0 * c * c * c, 0.0).sqrt();
    Vieta {
        s,
        c,
        v_plus: 0.5 * (-d + disc),
        v_minus: 0.5 * (-d - disc),
    }
}

fn branches(v: C64, c: f64, s: f64) -> [C64; 3] {
    if v.norm() == 0.0 {
        return [C64::new(s, 0.0); 3];
    }
    let u0 = v.cbrt();
    let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [C64::new(0.0, 0.0); 3];
    let mut u = u0;
    for root in &mut out {
        *root = u - c / u + s;
        u *= rot;
    }
    out
}

/// All six formal roots `Λ_{m,±}/J`: the "+" triple followed by the "-" triple.
pub fn formal_roots(p: &SdqParams) -> [C64; 6] {
    let v = vieta(p);
    let plus = branches(v.v_plus, v.c, v.s);
    let minus = branches(v.v_minus, v.c, v.s);
    [plus[0], plus[1], plus[2], minus[0], minus[1], minus[2]]
}

/// Keeps the "+" triple after checking that every "+" root has a partner in
/// the "-" triple within `tol_match` (relative to `max(1, |Λ|)`).
pub fn deduplicate_roots(roots: &[C64; 6], tol_match: f64) -> Option<[C64; 3]> {
    let mut used = [false; 3];
    for plus in &roots[..3] {
        let scale = plus.norm().max(1.0);
        let partner = (0..3).find(|&k| !used[k] && (roots[3 + k] - plus).norm() <= tol_match * scale)?;
        used[partner] = true;
    }
    Some([roots[0], roots[1], roots[2]])
}

/// Liouvillian spectrum from the closed-form cubic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CardanoSpectrum {
    /// Roots of the cubic in rate units, sorted by decreasing real part.
    pub cubic: [C64; 3],
    /// `λ3 = AJ`.
    pub lambda3: f64,
}

impl CardanoSpectrum {
    /// All four eigenvalues sorted by decreasing real part, then decreasing imaginary part.
    pub fn eigenvalues(&self) -> [C64; 4] {
        let mut all = [
            self.cubic[0],
            self.cubic[1],
            self.cubic[2],
            C64::new(self.lambda3, 0.0),
        ];
        all.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        all
    }

    pub fn lambda0(&self) -> C64 {
        self.eigenvalues()[0]
    }

    pub fn gap(&self) -> f64 {
        let e = self.eigenvalues();
        e[0].re - e[1].re
    }

    pub fn omega_max(&self) -> f64 {
        self.eigenvalues().iter().map(|l| l.im).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Refines a root by Newton steps as long as the residual keeps decreasing.
fn polish(p: &SdqParams, mut x: C64) -> C64 {
    let mut fx = characteristic_cubic(p, x).norm();
    for _ in 0..4 {
        let d = cubic_derivative(p, x);
        if d.norm() == 0.0 || fx == 0.0 {
            break;
        }
        let next = x - characteristic_cubic(p, x) / d;
        let fn_ = characteristic_cubic(p, next).norm();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

pub fn cardano_spectrum(p: &SdqParams) -> CardanoSpectrum {
    let v = vieta(p);
    let big = if v.v_plus.norm() >= v.v_minus.norm() {
        v.v_plus
    } else {
        v.v_minus
    };
    let mut cubic = branches(big, v.c, v.s).map(|x| polish(p, x) * p.j);
    // Real roots come out with round-off imaginary parts; conjugate pairs stay paired.
    for k in 0..3 {
        let x = cubic[k];
        let has_partner = (0..3).any(|m| m != k && (cubic[m] - x.conj()).norm() <= 1e-9 * x.norm().max(p.j));
        if !has_partner && x.im.abs() <= 1e-9 * x.norm().max(p.j) {
            cubic[k] = C64::new(x.re, 0.0);
        }
    }
    cubic.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    CardanoSpectrum {
        cubic,
        lambda3: p.a_const() * p.j,
    }
}

fn unique_lambda0(p: &SdqParams) -> Result<f64> {
    let spec = cardano_spectrum(p);
    let e = spec.eigenvalues();
    let l0 = e[0];
    let scale = l0.norm().max(p.j);
    if l0.im.abs() > tol::EPS_DEGENERATE * scale {
        return Err(Error::NoUniqueSteadyState(format!("leading eigenvalue {l0} is complex")));
    }
    if (l0.re - e[1].re).abs() <= tol::EPS_DEGENERATE * scale {
        return Err(Error::NoUniqueSteadyState(format!(
            "leading eigenvalue {l0} is degenerate with {}",
            e[1]
        )));
    }
    Ok(l0.re)
}

/// Stable steady state from the closed-form eigenvector
/// `(1, -iΛ0/2, iΛ0/2, 1 + Λ0(Λ0 - A)/2)` with `Λ0 = λ0/J`.
pub fn analytic_steady_state(p: &SdqParams) -> Result<DensityMatrix> {
    let l = unique_lambda0(p)? / p.j;
    let a = p.a_const();
    let q = l * (l - a) / 2.0;
    let norm = 2.0 + q;
    let m = ComplexMatrix::from_rows(&[
        [C64::new(1.0 / norm, 0.0), C64::new(0.0, -l / (2.0 * norm))],
        [C64::new(0.0, l / (2.0 * norm)), C64::new((1.0 + q) / norm, 0.0)],
    ])?;
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Steady-state Bloch coordinates `(y, z)` from the rate-unit formulas
/// `z = -λ0(λ0 - AJ)/(4J² + λ0(λ0 - AJ))`, `y = 2λ0 J/(4J² + λ0(λ0 - AJ))`.
pub fn steady_state_yz(p: &SdqParams) -> Result<(f64, f64)> {
    let l0 = unique_lambda0(p)?;
    let aj = p.a_const() * p.j;
    let den = 4.0 * p.j * p.j + l0 * (l0 - aj);
    Ok((2.0 * l0 * p.j / den, -l0 * (l0 - aj) / den))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let s = Self { x, y, z };
        if !(s.radius() <= 1.0 + 1e-9) {
            return Err(Error::InvalidState(format!("Bloch radius {} exceeds 1", s.radius())));
        }
        Ok(s)
    }

    /// `x = r sinθ cosφ`, `y = r sinθ sinφ`, `z = r cosθ`.
    pub fn from_polar(r: f64, theta: f64, phi: f64) -> Result<Self> {
        Self::new(
            r * theta.sin() * phi.cos(),
            r * theta.sin() * phi.sin(),
            r * theta.cos(),
        )
    }

    pub fn from_density_matrix(rho: &DensityMatrix) -> Result<Self> {
        let [x, y, z] = rho.bloch()?;
        Ok(Self { x, y, z })
    }

    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// `(r, θ, φ)`.
    pub fn polar(&self) -> (f64, f64, f64) {
        let r = self.radius();
        let theta = if r > 0.0 { (self.z / r).clamp(-1.0, 1.0).acos() } else { 0.0 };
        (r, theta, self.y.atan2(self.x))
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_bloch(self.x, self.y, self.z)
    }
}

/// Bloch-vector equations of motion of the normalized state.
pub fn bloch_rhs(s: &BlochState, p: &SdqParams) -> [f64; 3] {
    let (j, g, gg) = (p.j, p.gamma_decay, p.noise_product());
    let k = 1.0 - 2.0 * gg;
    let kappa = gg * g + s.z * g * k;
    [
        -kappa * s.x,
        -2.0 * j * s.z - kappa * s.y,
        2.0 * j * s.y - g * k * (s.z * s.z - 1.0),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarRates {
    pub r_dot: f64,
    pub theta_dot: f64,
    /// `None` at the poles, where the azimuth is undefined.
    pub phi_dot: Option<f64>,
}

pub fn polar_rhs(r: f64, theta: f64, phi: f64, p: &SdqParams) -> Result<PolarRates> {
    if !(r > 0.0) {
        return Err(Error::InvalidState("polar equations need r > 0".into()));
    }
    let (j, g, gg) = (p.j, p.gamma_decay, p.noise_product());
    let (st, ct) = theta.sin_cos();
    let r_dot = g * ((2.0 * gg - 1.0) * (r * r - 1.0) * ct - gg * r * st * st);
    let theta_dot = -(g * st / r) * (1.0 - 2.0 * gg + gg * r * ct) - 2.0 * j * phi.sin();
    let phi_dot = (st.abs() > 1e-12).then(|| -2.0 * j * phi.cos() * ct / st);
    Ok(PolarRates {
        r_dot,
        theta_dot,
        phi_dot,
    })
}

/// Radius on the `ṙ = 0` nullcline at polar angle `θ`.
///
/// Evaluated as `-2kc / (γΓ s² + sqrt(γ²Γ² s⁴ + 4k²c²))` with `k = 2γΓ - 1`,
/// `c = cosθ`, `s = sinθ`, which equals the quadratic-formula root and is
/// regular at `θ = π/2`. Negative values lie on the opposite side of the origin.
pub fn r_nullcline(p: &SdqParams, theta: f64) -> f64 {
    let gg = p.noise_product();
    let k = 2.0 * gg - 1.0;
    let (s, c) = theta.sin_cos();
    let den = gg * s * s + (gg * gg * s.powi(4) + 4.0 * k * k * c * c).sqrt();
    if den == 0.0 {
        return 0.0;
    }
    -2.0 * k * c / den
}

/// `γΓ → ∞` limit of [`r_nullcline`]: `-4c / (s² + sqrt(s⁴ + 16c²))`.
pub fn r_nullcline_limit(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    -4.0 * c / (s * s + (s.powi(4) + 16.0 * c * c).sqrt())
}

/// Radius on the `θ̇ = 0` nullcline in the `φ = π/2` plane:
/// `Γ(2γΓ - 1) sinθ / (2J + γΓ² cosθ sinθ)`.
pub fn theta_nullcline(p: &SdqParams, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let g = p.gamma_decay;
    g * (2.0 * p.noise_product() - 1.0) * s / (2.0 * p.j + p.gamma_noise * g * g * c * s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Nullclines {
    pub theta: Vec<f64>,
    /// Signed radii; see [`r_nullcline`].
    pub r_of_r: Vec<f64>,
    pub r_of_theta: Vec<f64>,
}

impl Nullclines {
    /// Both curves restricted to the Bloch ball, `r ∈ [0, 1]`.
    pub fn clipped(&self) -> Self {
        let clip = |v: &Vec<f64>| v.iter().map(|r| r.clamp(0.0, 1.0)).collect();
        Self {
            theta: self.theta.clone(),
            r_of_r: clip(&self.r_of_r),
            r_of_theta: clip(&self.r_of_theta),
        }
    }
}

pub fn nullclines(p: &SdqParams, theta_grid: &[f64]) -> Nullclines {
    Nullclines {
        theta: theta_grid.to_vec(),
        r_of_r: theta_grid.iter().map(|&t| r_nullcline(p, t)).collect(),
        r_of_theta: theta_grid.iter().map(|&t| theta_nullcline(p, t)).collect(),
    }
}

/// `½ ∫ r(θ)² dθ` by the trapezoid rule on a sorted grid.
pub fn polar_area(theta: &[f64], r: &[f64]) -> f64 {
    theta
        .windows(2)
        .zip(r.windows(2))
        .map(|(t, r)| 0.25 * (t[1] - t[0]) * (r[0] * r[0] + r[1] * r[1]))
        .sum()
}

/// `Ṗ = Γ[(2γΓ - 1)(r² - 1) z - γΓ (x² + y²)]`.
pub fn purity_rate_sdq(s: &BlochState, p: &SdqParams) -> f64 {
    let gg = p.noise_product();
    let r2 = s.x * s.x + s.y * s.y + s.z * s.z;
    p.gamma_decay * ((2.0 * gg - 1.0) * (r2 - 1.0) * s.z - gg * (s.x * s.x + s.y * s.y))
}

/// Trace of the unnormalized averaged state for unit initial trace:
/// `Tr ρ̃_t = e^{JBt} (1 - JB ∫₀ᵗ e^{-JBτ} ρ̃_ff(τ) dτ)` with `JB = 2Γ(2γΓ - 1)`.
///
/// `rho_ff` holds the `|f><f|` element of the unnormalized state on the
/// uniform grid `times`; the integral uses the trapezoid rule.
pub fn success_rate(p: &SdqParams, rho_ff: &[f64], times: &[f64]) -> Result<Vec<f64>> {
    if rho_ff.len() != times.len() {
        return Err(Error::BadLength {
            expected: times.len(),
            got: rho_ff.len(),
        });
    }
    let jb = p.b_const() * p.j;
    let mut out = Vec::with_capacity(times.len());
    let mut integral = 0.0;
    for k in 0..times.len() {
        if k > 0 {
            let f = |i: usize| (-jb * (times[i] - times[0])).exp() * rho_ff[i];
            integral += 0.5 * (times[k] - times[k - 1]) * (f(k) + f(k - 1));
        }
        let t = times[k] - times[0];
        out.push((jb * t).exp() * (1.0 - jb * integral));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mapping {
    Mapped { mu: f64, param: f64 },
    NotMappable,
}

/// `Γ - γΓ² = μ/2`, `2γΓ² = μ e^{-s}`; requires `γ < 1/Γ`.
pub fn map_to_tilted(p: &SdqParams) -> Mapping {
    let g = p.gamma_decay;
    if p.gamma_noise >= 1.0 / g {
        return Mapping::NotMappable;
    }
    let mu = 2.0 * g * (1.0 - p.gamma_noise * g);
    let jump = 2.0 * p.gamma_noise * g * g;
    let s = if jump == 0.0 { f64::INFINITY } else { -(jump / mu).ln() };
    Mapping::Mapped { mu, param: s }
}

/// `2γΓ² = μ q`; requires `γ < 1/(2Γ)`.
pub fn map_to_hybrid(p: &SdqParams) -> Mapping {
    let g = p.gamma_decay;
    if p.gamma_noise >= 1.0 / g || p.gamma_noise >= 1.0 / (2.0 * g) {
        return Mapping::NotMappable;
    }
    let mu = 2.0 * g * (1.0 - p.gamma_noise * g);
    let jump = 2.0 * p.gamma_noise * g * g;
    let q = if jump == 0.0 { 0.0 } else { jump / mu };
    Mapping::Mapped { mu, param: q }
}

/// `-i[Jσx, ρ] + μ(w Π ρ Π - ½{Π, ρ})`.
fn jump_generator(j: f64, mu: f64, weight: f64) -> Superoperator {
    let h = pauli::x().scale_real(j);
    let pi = ComplexMatrix::real_diag(&[0.0, 1.0]);
    let mut m = (&left_mul(&h) - &right_mul(&h)).scale(C64::new(0.0, -1.0));
    m.axpy(C64::new(mu * weight, 0.0), &sandwich(&pi, &pi));
    m.axpy(C64::new(-0.5 * mu, 0.0), &left_mul(&pi));
    m.axpy(C64::new(-0.5 * mu, 0.0), &right_mul(&pi));
    Superoperator::new(2, m).expect("4x4")
}

/// Tilted generator `-i[H, ρ] + μ(e^{-s} Π ρ Π - ½{Π, ρ})`.
pub fn tilted_generator(j: f64, mu: f64, s: f64) -> Superoperator {
    jump_generator(j, mu, (-s).exp())
}

/// Hybrid Liouvillian `-i[H, ρ] + μ(q Π ρ Π - ½{Π, ρ})`.
pub fn hybrid_generator(j: f64, mu: f64, q: f64) -> Superoperator {
    jump_generator(j, mu, q)
}
