//! Propagation back-ends: Itô trajectories of the unnormalized state, RK4 on
//! the nonlinear trace-preserving equation, and exponential propagation of the
//! averaged generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liouvillian::{build_liouvillian, noise_superoperator, Superoperator};
use crate::model::StochNhModel;
use crate::operator::{expm, vec_trace, ComplexMatrix, C64};
use crate::state::DensityMatrix;
use crate::tol;

/// Stored states per run when sampling automatically.
pub const MAX_SAMPLES: usize = 1000;

const ENSEMBLE_CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Euler-Maruyama on the Itô equation for `ρ̃`.
    EulerIto,
    /// `ρ̃ ← U ρ̃ U†` with `U = expm(-iH0 dt - L_d dt - sqrt(2γ) L_s dW)`.
    ExpStep,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::EulerIto => "euler_ito",
            Scheme::ExpStep => "exp_step",
        }
    }
}

/// Which steps are stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every `ceil(n_steps / 1000)`-th step.
    Auto,
    Every(usize),
}

impl Sampling {
    fn stride(self, n_steps: usize) -> usize {
        match self {
            Sampling::Auto => n_steps.div_ceil(MAX_SAMPLES).max(1),
            Sampling::Every(k) => k.max(1),
        }
    }
}

/// Recorded step indices: `0, s, 2s, ...` and always the final step.
pub fn sample_steps(n_steps: usize, sampling: Sampling) -> Vec<usize> {
    let stride = sampling.stride(n_steps);
    let mut steps: Vec<usize> = (0..=n_steps).step_by(stride).collect();
    if *steps.last().unwrap() != n_steps {
        steps.push(n_steps);
    }
    steps
}

fn step_count(dt: f64, t_end: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("time step must be finite and > 0, got {dt}"),
        });
    }
    if !(t_end >= dt) || !t_end.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("final time must be finite and >= dt, got {t_end}"),
        });
    }
    Ok((t_end / dt).round() as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryConfig {
    pub dt: f64,
    pub t_end: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub scheme: Scheme,
    /// Pairs trajectories `2k, 2k+1` with opposite Wiener increments.
    pub antithetic: bool,
    pub sampling: Sampling,
}

impl TrajectoryConfig {
    pub fn new(dt: f64, t_end: f64, n_traj: usize, seed: u64, scheme: Scheme) -> Self {
        Self {
            dt,
            t_end,
            n_traj,
            seed,
            scheme,
            antithetic: false,
            sampling: Sampling::Auto,
        }
    }

    pub fn validate(&self) -> Result<usize> {
        let n = step_count(self.dt, self.t_end)?;
        if self.n_traj == 0 {
            return Err(Error::InvalidParameter {
                name: "n_traj",
                reason: "need at least one trajectory".into(),
            });
        }
        if self.antithetic && self.n_traj % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "n_traj",
                reason: "antithetic sampling needs an even trajectory count".into(),
            });
        }
        Ok(n)
    }
}

/// Closed-form exponential of a 2×2 matrix, `e^a (cosh q + sinh q / q · B)`
/// with `M = a + B`, `B` traceless and `q² = -det B`.
fn expm2(m: &[C64; 4]) -> [C64; 4] {
    let a = 0.5 * (m[0] + m[3]);
    let b = [m[0] - a, m[1], m[2], m[3] - a];
    let q2 = b[0] * b[0] + b[1] * b[2];
    let q = q2.sqrt();
    let (ch, sh) = if q.norm() < 1e-4 {
        (
            1.0 + q2 / 2.0 + q2 * q2 / 24.0,
            1.0 + q2 / 6.0 + q2 * q2 / 120.0,
        )
    } else {
        (q.cosh(), q.sinh() / q)
    };
    let e = a.exp();
    [
        e * (ch + sh * b[0]),
        e * sh * b[1],
        e * sh * b[2],
        e * (ch + sh * b[3]),
    ]
}

/// Per-model data reused across steps.
struct Stepper {
    dim: usize,
    gamma_sqrt2: f64,
    drift: ComplexMatrix,
    l_stoch: ComplexMatrix,
    liouvillian: Superoperator,
    noise: Superoperator,
}

impl Stepper {
    fn new(m: &StochNhModel) -> Self {
        Self {
            dim: m.dim(),
            gamma_sqrt2: (2.0 * m.gamma()).sqrt(),
            drift: m.drift_generator(),
            l_stoch: m.effective_l_stoch(),
            liouvillian: build_liouvillian(m),
            noise: noise_superoperator(m),
        }
    }

    fn propagator(&self, dt: f64, dw: f64) -> ComplexMatrix {
        let mut x = self.drift.scale_real(dt);
        x.axpy(C64::new(-self.gamma_sqrt2 * dw, 0.0), &self.l_stoch);
        if self.dim == 2 {
            let s = x.as_slice();
            ComplexMatrix::from_row_major(expm2(&[s[0], s[1], s[2], s[3]]).to_vec())
                .expect("2x2")
        } else {
            expm(&x).unwrap_or_else(|_| ComplexMatrix::from_fn(self.dim, |_, _| C64::new(f64::NAN, 0.0)))
        }
    }

    fn step(&self, v: &mut Vec<C64>, scheme: Scheme, dt: f64, dw: f64, scratch: &mut Vec<C64>) {
        match scheme {
            Scheme::EulerIto => {
                self.liouvillian.matrix().matvec_into(v, scratch);
                let drift = std::mem::take(scratch);
                let mut noise = vec![C64::new(0.0, 0.0); v.len()];
                self.noise.matrix().matvec_into(v, &mut noise);
                for ((x, d), n) in v.iter_mut().zip(&drift).zip(&noise) {
                    *x += dt * d + dw * n;
                }
                *scratch = drift;
            }
            Scheme::ExpStep => {
                let u = self.propagator(dt, dw);
                let rho = ComplexMatrix::from_row_major(std::mem::take(v)).expect("square");
                let out = &(&u * &rho) * &u.adjoint();
                *v = out.into_vec();
            }
        }
    }
}

/// One step of the unnormalized stochastic evolution.
pub fn sde_step(
    rho: &ComplexMatrix,
    m: &StochNhModel,
    dt: f64,
    dw: f64,
    scheme: Scheme,
) -> Result<ComplexMatrix> {
    if rho.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: rho.dim(),
        });
    }
    let stepper = Stepper::new(m);
    let mut v = rho.as_slice().to_vec();
    let mut scratch = vec![C64::new(0.0, 0.0); v.len()];
    stepper.step(&mut v, scheme, dt, dw, &mut scratch);
    ComplexMatrix::from_row_major(v)
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Unnormalized states `ρ̃_t`.
    pub states: Vec<DensityMatrix>,
    pub traces: Vec<f64>,
    /// Set when the trace reached zero or below; recording stops there.
    pub truncated: bool,
}

fn trajectory_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs trajectory `index` of `cfg`. Antithetic partners share stream `index / 2`.
pub fn simulate_trajectory(
    m: &StochNhModel,
    rho0: &ComplexMatrix,
    cfg: &TrajectoryConfig,
    index: u64,
) -> Result<Trajectory> {
    let n_steps = cfg.validate()?;
    let stepper = Stepper::new(m);
    let steps = sample_steps(n_steps, cfg.sampling);
    let mut out = Trajectory {
        times: Vec::with_capacity(steps.len()),
        states: Vec::with_capacity(steps.len()),
        traces: Vec::with_capacity(steps.len()),
        truncated: false,
    };
    run_path(&stepper, rho0, cfg, n_steps, &steps, index, |_, t, v| {
        let tr = vec_trace(v, stepper.dim).re;
        out.times.push(t);
        out.states.push(DensityMatrix::from_matrix_unchecked(
            ComplexMatrix::from_row_major(v.to_vec()).expect("square"),
        ));
        out.traces.push(tr);
        if !(tr > 0.0) {
            out.truncated = true;
            return false;
        }
        true
    })?;
    Ok(out)
}

/// Integrates one path and hands each sampled state to `record`, which
/// returns `false` to stop early.
fn run_path(
    stepper: &Stepper,
    rho0: &ComplexMatrix,
    cfg: &TrajectoryConfig,
    n_steps: usize,
    steps: &[usize],
    index: u64,
    mut record: impl FnMut(usize, f64, &[C64]) -> bool,
) -> Result<()> {
    let (stream, sign) = if cfg.antithetic {
        (index / 2, if index % 2 == 0 { 1.0 } else { -1.0 })
    } else {
        (index, 1.0)
    };
    let mut rng = trajectory_rng(cfg.seed, stream);
    let sqrt_dt = cfg.dt.sqrt();
    let mut v = rho0.as_slice().to_vec();
    let mut scratch = vec![C64::new(0.0, 0.0); v.len()];
    let mut next = 0;
    for step in 0..=n_steps {
        if step > 0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            stepper.step(&mut v, cfg.scheme, cfg.dt, sign * sqrt_dt * z, &mut scratch);
            if v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                return Err(Error::TrajectoryNonFinite {
                    seed: cfg.seed,
                    trajectory: index,
                    step,
                });
            }
        }
        if next < steps.len() && steps[next] == step {
            if !record(next, step as f64 * cfg.dt, &v) {
                return Ok(());
            }
            next += 1;
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    /// Entrywise mean of `ρ̃_t`.
    pub mean: Vec<DensityMatrix>,
    /// Per-entry standard error of the mean, `sqrt(Σ|x - m|² / (n(n - 1)))`, row-major.
    pub stderr: Vec<Vec<f64>>,
    /// Number of independent samples behind each mean (pairs when antithetic).
    pub samples: usize,
}

/// Running mean and sum of squared deviations per sampled entry.
#[derive(Clone)]
struct Moments {
    n: f64,
    mean: Vec<C64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(len: usize) -> Self {
        Self {
            n: 0.0,
            mean: vec![C64::new(0.0, 0.0); len],
            m2: vec![0.0; len],
        }
    }

    fn push(&mut self, x: &[C64]) {
        self.n += 1.0;
        for ((m, s), x) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let d = x - *m;
            *m += d / self.n;
            *s += d.norm_sqr() * (self.n - 1.0) / self.n;
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        for k in 0..self.mean.len() {
            let d = other.mean[k] - self.mean[k];
            self.m2[k] += other.m2[k] + d.norm_sqr() * self.n * other.n / n;
            self.mean[k] += d * (other.n / n);
        }
        self.n = n;
        self
    }
}

/// Averages `n_traj` independent paths in parallel. The reduction runs over
/// fixed chunks merged in index order, so results do not depend on the thread count.
pub fn simulate_ensemble(
    m: &StochNhModel,
    rho0: &ComplexMatrix,
    cfg: &TrajectoryConfig,
) -> Result<EnsembleResult> {
    let n_steps = cfg.validate()?;
    let stepper = Stepper::new(m);
    let steps = sample_steps(n_steps, cfg.sampling);
    let nn = stepper.dim * stepper.dim;
    let len = steps.len() * nn;
    let group = if cfg.antithetic { 2 } else { 1 };
    let n_samples = cfg.n_traj / group;

    let chunks: Vec<(usize, usize)> = (0..n_samples)
        .step_by(ENSEMBLE_CHUNK)
        .map(|s| (s, (s + ENSEMBLE_CHUNK).min(n_samples)))
        .collect();
    let partials: Vec<Result<Moments>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = Moments::new(len);
            let mut sample = vec![C64::new(0.0, 0.0); len];
            for s in lo..hi {
                sample.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
                for member in 0..group {
                    let index = (s * group + member) as u64;
                    run_path(&stepper, rho0, cfg, n_steps, &steps, index, |k, _, v| {
                        for (dst, src) in sample[k * nn..(k + 1) * nn].iter_mut().zip(v) {
                            *dst += src / group as f64;
                        }
                        true
                    })?;
                }
                acc.push(&sample);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Moments::new(len);
    for p in partials {
        total = total.merge(&p?);
    }

    let n = total.n;
    let denom = if n > 1.0 { n * (n - 1.0) } else { f64::INFINITY };
    let mut mean = Vec::with_capacity(steps.len());
    let mut stderr = Vec::with_capacity(steps.len());
    for k in 0..steps.len() {
        let block = &total.mean[k * nn..(k + 1) * nn];
        mean.push(DensityMatrix::from_matrix_unchecked(
            ComplexMatrix::from_row_major(block.to_vec())?,
        ));
        stderr.push(total.m2[k * nn..(k + 1) * nn].iter().map(|s| (s / denom).sqrt()).collect());
    }
    Ok(EnsembleResult {
        times: steps.iter().map(|&s| s as f64 * cfg.dt).collect(),
        mean,
        stderr,
        samples: n_samples,
    })
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub times: Vec<f64>,
    /// Unit-trace states.
    pub states: Vec<DensityMatrix>,
    /// Trace of the unnormalized state; identically 1 for RK4.
    pub traces: Vec<f64>,
    /// Natural log of `traces`, kept separately so long runs do not underflow.
    pub log_traces: Vec<f64>,
}

fn check_start(rho0: &ComplexMatrix, dim: usize) -> Result<()> {
    if rho0.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: rho0.dim(),
        });
    }
    let tr = rho0.trace();
    if (tr - 1.0).norm() > tol::EPS_TRACE {
        return Err(Error::InvalidState(format!("initial trace {tr} is not 1")));
    }
    Ok(())
}

fn nonlinear_rhs(l: &ComplexMatrix, dim: usize, v: &[C64], out: &mut [C64]) {
    l.matvec_into(v, out);
    let tr = vec_trace(out, dim);
    for (o, x) in out.iter_mut().zip(v) {
        *o -= tr * x;
    }
}

/// RK4 on `ρ̇ = L̃ρ - Tr(L̃ρ)ρ`, renormalized after every step.
pub fn evolve_rk4(m: &StochNhModel, rho0: &ComplexMatrix, dt: f64, t_end: f64) -> Result<Evolution> {
    evolve_rk4_sampled(m, rho0, dt, t_end, Sampling::Auto)
}

pub fn evolve_rk4_sampled(
    m: &StochNhModel,
    rho0: &ComplexMatrix,
    dt: f64,
    t_end: f64,
    sampling: Sampling,
) -> Result<Evolution> {
    let n_steps = step_count(dt, t_end)?;
    let dim = m.dim();
    check_start(rho0, dim)?;
    let sop = build_liouvillian(m);
    let l = sop.matrix();
    let steps = sample_steps(n_steps, sampling);
    let len = dim * dim;
    let mut v = rho0.as_slice().to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![C64::new(0.0, 0.0); len], vec![C64::new(0.0, 0.0); len], vec![C64::new(0.0, 0.0); len], vec![C64::new(0.0, 0.0); len]);
    let mut tmp = vec![C64::new(0.0, 0.0); len];
    let mut out = Evolution {
        times: Vec::with_capacity(steps.len()),
        states: Vec::with_capacity(steps.len()),
        traces: Vec::with_capacity(steps.len()),
        log_traces: Vec::with_capacity(steps.len()),
    };
    let mut next = 0;
    for step in 0..=n_steps {
        if step > 0 {
            nonlinear_rhs(l, dim, &v, &mut k1);
            for i in 0..len {
                tmp[i] = v[i] + 0.5 * dt * k1[i];
            }
            nonlinear_rhs(l, dim, &tmp, &mut k2);
            for i in 0..len {
                tmp[i] = v[i] + 0.5 * dt * k2[i];
            }
            nonlinear_rhs(l, dim, &tmp, &mut k3);
            for i in 0..len {
                tmp[i] = v[i] + dt * k3[i];
            }
            nonlinear_rhs(l, dim, &tmp, &mut k4);
            for i in 0..len {
                v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            let magnitude = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
            if !(magnitude <= tol::BLOWUP) {
                return Err(Error::Unstable {
                    time: step as f64 * dt,
                    magnitude,
                });
            }
            let tr = vec_trace(&v, dim);
            v.iter_mut().for_each(|x| *x /= tr);
        }
        if next < steps.len() && steps[next] == step {
            out.times.push(step as f64 * dt);
            out.states.push(DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_row_major(v.clone())?));
            out.traces.push(1.0);
            out.log_traces.push(0.0);
            next += 1;
        }
    }
    Ok(out)
}

/// Repeated application of `K = expm(L̃ dt)`, recording normalized states and the raw trace.
pub fn evolve_exp(sop: &Superoperator, rho0: &ComplexMatrix, dt: f64, t_end: f64) -> Result<Evolution> {
    evolve_exp_sampled(sop, rho0, dt, t_end, Sampling::Auto)
}

pub fn evolve_exp_sampled(
    sop: &Superoperator,
    rho0: &ComplexMatrix,
    dt: f64,
    t_end: f64,
    sampling: Sampling,
) -> Result<Evolution> {
    let n_steps = step_count(dt, t_end)?;
    let dim = sop.dim();
    check_start(rho0, dim)?;
    let k = expm(&sop.matrix().scale_real(dt))?;
    let steps = sample_steps(n_steps, sampling);
    let mut v = rho0.as_slice().to_vec();
    let mut next_v = vec![C64::new(0.0, 0.0); v.len()];
    let mut log_trace = 0.0;
    let mut out = Evolution {
        times: Vec::with_capacity(steps.len()),
        states: Vec::with_capacity(steps.len()),
        traces: Vec::with_capacity(steps.len()),
        log_traces: Vec::with_capacity(steps.len()),
    };
    let mut next = 0;
    for step in 0..=n_steps {
        if step > 0 {
            k.matvec_into(&v, &mut next_v);
            let tr = vec_trace(&next_v, dim).re;
            if !(tr > 0.0) || !tr.is_finite() {
                return Err(Error::UnphysicalTrace { step, trace: tr });
            }
            log_trace += tr.ln();
            for (dst, src) in v.iter_mut().zip(&next_v) {
                *dst = src / tr;
            }
        }
        if next < steps.len() && steps[next] == step {
            out.times.push(step as f64 * dt);
            out.states.push(DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_row_major(v.clone())?));
            out.traces.push(log_trace.exp());
            out.log_traces.push(log_trace);
            next += 1;
        }
    }
    Ok(out)
}
