//! Parallel parameter sweeps over the stochastic dissipative qubit.

use rayon::prelude::*;

use super::fidelity_qubit;
use crate::error::{Error, Result};
use crate::operator::{expm, ComplexMatrix};
use crate::sdq::{analytic_steady_state, cardano_spectrum, phase, steady_state_yz, SdqParams};
use crate::state::DensityMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: "axis values must be finite and non-empty".into(),
            });
        }
        Ok(Self {
            name: name.into(),
            values,
        })
    }

    /// `n` points from `lo` to `hi` inclusive, evenly spaced in log scale.
    pub fn log(name: impl Into<String>, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo && n >= 1) {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: format!("log axis needs 0 < lo <= hi and n >= 1, got [{lo}, {hi}] x {n}"),
            });
        }
        let (a, b) = (lo.ln(), hi.ln());
        let values = (0..n)
            .map(|k| {
                if n == 1 {
                    lo
                } else {
                    (a + (b - a) * k as f64 / (n - 1) as f64).exp()
                }
            })
            .collect();
        Self::new(name, values)
    }

    pub fn linear(name: impl Into<String>, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi >= lo && n >= 1) {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: format!("linear axis needs lo <= hi and n >= 1, got [{lo}, {hi}] x {n}"),
            });
        }
        let values = (0..n)
            .map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
            .collect();
        Self::new(name, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellStatus {
    Complete,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub status: CellStatus,
    /// One value per grid column; NaN where a failed cell could not compute it.
    pub values: Vec<f64>,
    /// Optional label column, such as the phase name.
    pub label: Option<String>,
}

impl Cell {
    pub fn is_complete(&self) -> bool {
        self.status == CellStatus::Complete
    }
}

/// Row-major grid: cell `(i, k)` sits at `i * axis2.len() + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Axis,
    pub columns: Vec<&'static str>,
    pub label_column: Option<&'static str>,
    pub cells: Vec<Cell>,
}

impl SweepGrid {
    pub fn cell(&self, i: usize, k: usize) -> &Cell {
        &self.cells[i * self.axis2.len() + k]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Value of `column` at `(i, k)`.
    pub fn value(&self, i: usize, k: usize, column: &str) -> Option<f64> {
        self.column_index(column).map(|c| self.cell(i, k).values[c])
    }

    pub fn failed_count(&self) -> usize {
        self.cells.iter().filter(|c| !c.is_complete()).count()
    }
}

fn run_grid(
    axis1: Axis,
    axis2: Axis,
    columns: Vec<&'static str>,
    label_column: Option<&'static str>,
    f: impl Fn(f64, f64) -> Cell + Sync,
) -> SweepGrid {
    let n2 = axis2.len();
    let cells = (0..axis1.len() * n2)
        .into_par_iter()
        .map(|idx| f(axis1.values[idx / n2], axis2.values[idx % n2]))
        .collect();
    SweepGrid {
        axis1,
        axis2,
        columns,
        label_column,
        cells,
    }
}

/// Default phase-diagram axes: `γJ ∈ [1e-3, 10]` and `Γ/J ∈ [0.1, 100]`, log spaced.
pub fn default_phase_axes(n1: usize, n2: usize) -> Result<(Axis, Axis)> {
    Ok((
        Axis::log("gammaJ", 1e-3, 10.0, n1)?,
        Axis::log("GammaOverJ", 0.1, 100.0, n2)?,
    ))
}

pub const PHASE_COLUMNS: [&str; 4] = ["gap", "omega_max", "z_ss", "y_ss"];

/// Gap, largest frequency and steady-state `(z, y)` per `(γJ, Γ/J)` cell at coupling `j`.
pub fn sweep_phase_diagram(j: f64, gamma_axis: Axis, big_gamma_axis: Axis) -> Result<SweepGrid> {
    SdqParams::new(j, 1.0, 0.0)?;
    Ok(run_grid(
        gamma_axis,
        big_gamma_axis,
        PHASE_COLUMNS.to_vec(),
        Some("phase"),
        |gj, g_over_j| {
            let p = match SdqParams::new(j, g_over_j * j, gj / j) {
                Ok(p) => p,
                Err(e) => {
                    return Cell {
                        status: CellStatus::Failed(e.to_string()),
                        values: vec![f64::NAN; 4],
                        label: None,
                    }
                }
            };
            let spec = cardano_spectrum(&p);
            let label = Some(phase(&p).as_str().to_string());
            match steady_state_yz(&p) {
                Ok((y, z)) => Cell {
                    status: CellStatus::Complete,
                    values: vec![spec.gap(), spec.omega_max(), z, y],
                    label,
                },
                Err(e) => Cell {
                    status: CellStatus::Failed(e.to_string()),
                    values: vec![spec.gap(), spec.omega_max(), f64::NAN, f64::NAN],
                    label,
                },
            }
        },
    ))
}

pub const FIDELITY_COLUMNS: [&str; 3] = ["fidelity", "inv_gap", "period"];

/// `F(ρ_t, ρˢ)` per `(Γ/J, Jt)` cell at fixed `γ`, with the timescales `Δ⁻¹`
/// and `2π/ω_max` (infinite when non-oscillatory) alongside.
pub fn sweep_fidelity_map(
    j: f64,
    gamma_noise: f64,
    big_gamma_axis: Axis,
    time_axis: Axis,
    rho0: &DensityMatrix,
) -> Result<SweepGrid> {
    SdqParams::new(j, 1.0, gamma_noise)?;
    if rho0.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: rho0.dim(),
        });
    }
    if time_axis.values.iter().any(|&t| t < 0.0) {
        return Err(Error::InvalidParameter {
            name: "time axis",
            reason: "times must be non-negative".into(),
        });
    }

    struct Column {
        l: ComplexMatrix,
        target: Result<DensityMatrix>,
        inv_gap: f64,
        period: f64,
    }
    let columns: Vec<Result<Column>> = big_gamma_axis
        .values
        .par_iter()
        .map(|&g| {
            let p = SdqParams::new(j, g * j, gamma_noise)?;
            let spec = cardano_spectrum(&p);
            let w = spec.omega_max();
            Ok(Column {
                l: p.liouvillian().into_matrix(),
                target: analytic_steady_state(&p),
                inv_gap: 1.0 / spec.gap(),
                period: if w > 1e-10 * j { 2.0 * std::f64::consts::PI / w } else { f64::INFINITY },
            })
        })
        .collect();

    let n_t = time_axis.len();
    let cells = (0..big_gamma_axis.len() * n_t)
        .into_par_iter()
        .map(|idx| {
            let fail = |msg: String, inv_gap, period| Cell {
                status: CellStatus::Failed(msg),
                values: vec![f64::NAN, inv_gap, period],
                label: None,
            };
            let col = match &columns[idx / n_t] {
                Ok(c) => c,
                Err(e) => return fail(e.to_string(), f64::NAN, f64::NAN),
            };
            let target = match &col.target {
                Ok(t) => t,
                Err(e) => return fail(e.to_string(), col.inv_gap, col.period),
            };
            let t = time_axis.values[idx % n_t];
            let state = expm(&col.l.scale_real(t)).and_then(|k| {
                let v = k.matvec(rho0.matrix().as_slice());
                let raw = ComplexMatrix::from_row_major(v)?;
                let tr = raw.trace().re;
                if !(tr > 0.0) {
                    return Err(Error::UnphysicalTrace { step: 0, trace: tr });
                }
                fidelity_qubit(&raw.scale_real(1.0 / tr), target.matrix())
            });
            match state {
                Ok(f) => Cell {
                    status: CellStatus::Complete,
                    values: vec![f, col.inv_gap, col.period],
                    label: None,
                },
                Err(e) => fail(e.to_string(), col.inv_gap, col.period),
            }
        })
        .collect();
    Ok(SweepGrid {
        axis1: big_gamma_axis,
        axis2: time_axis,
        columns: FIDELITY_COLUMNS.to_vec(),
        label_column: None,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdq::Phase;

    #[test]
    fn axes() {
        let a = Axis::log("x", 1e-3, 10.0, 5).unwrap();
        assert!((a.values[0] - 1e-3).abs() < 1e-18);
        assert!((a.values[4] - 10.0).abs() < 1e-12);
        assert!((a.values[1] / a.values[0] - 10.0).abs() < 1e-12);
        assert!(Axis::log("x", 0.0, 1.0, 3).is_err());
        assert_eq!(Axis::linear("t", 0.0, 1.0, 3).unwrap().values, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn phase_grid_layout_and_labels() {
        let g = Axis::new("gammaJ", vec![0.001, 5.0]).unwrap();
        let b = Axis::new("GammaOverJ", vec![0.5, 50.0, 1.0]).unwrap();
        let grid = sweep_phase_diagram(1.0, g, b).unwrap();
        assert_eq!(grid.cells.len(), 6);
        assert_eq!(grid.cell(0, 0).label.as_deref(), Some(Phase::PtUnbroken.as_str()));
        assert_eq!(grid.cell(0, 1).label.as_deref(), Some(Phase::PtBroken.as_str()));
        assert_eq!(grid.cell(1, 1).label.as_deref(), Some(Phase::NoiseInduced.as_str()));
        assert!(grid.value(0, 1, "z_ss").unwrap() > 0.9);
        assert!(grid.value(1, 1, "z_ss").unwrap() < -0.9);
        assert!(grid.value(0, 0, "omega_max").unwrap() > 0.0);
    }

    #[test]
    fn phase_grid_is_deterministic() {
        let (a, b) = default_phase_axes(7, 9).unwrap();
        let x = sweep_phase_diagram(1.0, a.clone(), b.clone()).unwrap();
        let y = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sweep_phase_diagram(1.0, a, b).unwrap());
        for (c, d) in x.cells.iter().zip(&y.cells) {
            assert_eq!(c.status, d.status);
            for (u, v) in c.values.iter().zip(&d.values) {
                assert!(u.to_bits() == v.to_bits() || (u.is_nan() && v.is_nan()));
            }
        }
    }

    #[test]
    fn fidelity_map_t0_row_is_direct_fidelity() {
        let rho0 = DensityMatrix::from_bloch(0.2, 0.8, 0.4).unwrap();
        let gs = Axis::new("GammaOverJ", vec![1.0, 10.0]).unwrap();
        let ts = Axis::new("t", vec![0.0, 1.0, 400.0]).unwrap();
        let grid = sweep_fidelity_map(1.0, 0.05, gs, ts, &rho0).unwrap();
        for (i, g) in [1.0, 10.0].into_iter().enumerate() {
            let p = SdqParams::new(1.0, g, 0.05).unwrap();
            let ss = analytic_steady_state(&p).unwrap();
            let want = fidelity_qubit(rho0.matrix(), ss.matrix()).unwrap();
            assert!((grid.value(i, 0, "fidelity").unwrap() - want).abs() < 1e-12);
            assert!(grid.value(i, 2, "fidelity").unwrap() > 1.0 - 1e-9);
        }
        assert!(grid.value(0, 0, "period").unwrap().is_finite());
        assert!(grid.value(1, 0, "period").unwrap().is_infinite());
    }
}
