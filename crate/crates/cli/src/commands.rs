//! One function per subcommand; each returns the rendered data and extra sidecar metadata.

use antideph::dynamics::{
    evolve_exp, evolve_rk4, simulate_ensemble, simulate_trajectory, Evolution, TrajectoryConfig,
};
use antideph::liouvillian::standard_form::{gell_mann_basis, gksl_g, project, standard_form};
use antideph::liouvillian::{build_liouvillian, decompose};
use antideph::observables::purity;
use antideph::observables::sweep::{sweep_fidelity_map, sweep_phase_diagram, Axis, CellStatus, SweepGrid};
use antideph::sdq::{cardano_spectrum, nullclines};
use antideph::{ComplexMatrix, DensityMatrix, StochNhModel};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{build_model, initial_state, Backend, CommandName, Format, Resolved};
use crate::output::{matrix_columns, Field, Table};
use crate::CliError;

pub struct Rendered {
    pub data: String,
    pub extra: Value,
}

fn render(cfg: &Resolved, table: &Table, extra: Value) -> Rendered {
    let data = match cfg.output.format {
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(&table.to_json()).expect("serializable") + "\n",
    };
    Rendered { data, extra }
}

fn json_out(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn describe(cfg: &Resolved, m: &StochNhModel) -> String {
    match cfg.model.as_ref().and_then(|s| s.sdq) {
        Some(s) => format!("J={}, Gamma={}, gamma={}", s.j, s.big_gamma, s.gamma),
        None => format!("dim={}, gamma={}", m.dim(), m.gamma()),
    }
}

fn numerical(module: &'static str, params: String) -> impl FnOnce(antideph::Error) -> CliError {
    move |source| CliError::Numerical {
        module,
        params,
        source,
    }
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect::<Value>())
        .collect()
}

fn entries(m: &ComplexMatrix) -> impl Iterator<Item = f64> + '_ {
    m.as_slice().iter().flat_map(|z| [z.re, z.im])
}

pub fn run(cfg: &Resolved) -> Result<Rendered, CliError> {
    match cfg.command {
        CommandName::Simulate => simulate(cfg),
        CommandName::Trajectories => trajectories(cfg),
        CommandName::Spectrum => spectrum(cfg),
        CommandName::PhaseDiagram => phase_diagram(cfg),
        CommandName::FidelityMap => fidelity_map(cfg),
        CommandName::Nullclines => nullcline_table(cfg),
        CommandName::StandardForm => standard_form_json(cfg),
        CommandName::Validate => unreachable!("validate is handled by the caller"),
    }
}

fn model_and_state(cfg: &Resolved) -> Result<(StochNhModel, DensityMatrix), CliError> {
    let m = build_model(cfg.model.as_ref().expect("resolved"))?;
    let rho0 = initial_state(&cfg.initial_state, m.dim())?;
    Ok((m, rho0))
}

fn trajectory_config(cfg: &Resolved) -> TrajectoryConfig {
    let n = &cfg.numerics;
    let mut tc = TrajectoryConfig::new(n.dt, n.t_end, n.n_traj, n.seed, n.scheme.into());
    tc.antithetic = n.antithetic;
    tc
}

fn simulate(cfg: &Resolved) -> Result<Rendered, CliError> {
    let (m, rho0) = model_and_state(cfg)?;
    let n = &cfg.numerics;
    let ctx = format!("{}, backend {:?}, dt={}, t_end={}", describe(cfg, &m), n.backend, n.dt, n.t_end);
    let ev: Evolution = match n.backend {
        Backend::Rk4 => evolve_rk4(&m, rho0.matrix(), n.dt, n.t_end).map_err(numerical("dynamics", ctx))?,
        Backend::Exp => {
            evolve_exp(&build_liouvillian(&m), rho0.matrix(), n.dt, n.t_end).map_err(numerical("dynamics", ctx))?
        }
        Backend::Sde => {
            let ens = simulate_ensemble(&m, rho0.matrix(), &trajectory_config(cfg)).map_err(numerical("dynamics", ctx))?;
            let traces: Vec<f64> = ens.mean.iter().map(|s| s.trace()).collect();
            Evolution {
                states: ens
                    .mean
                    .iter()
                    .zip(&traces)
                    .map(|(s, t)| DensityMatrix::from_matrix_unchecked(s.matrix().scale_real(1.0 / t)))
                    .collect(),
                log_traces: traces.iter().map(|t| t.ln()).collect(),
                traces,
                times: ens.times,
            }
        }
    };
    let dim = m.dim();
    let mut table = Table::new(
        std::iter::once("t".to_string())
            .chain(matrix_columns("rho", dim))
            .chain(["trace".to_string(), "purity".to_string()]),
    );
    for k in 0..ev.times.len() {
        let s = ev.states[k].matrix();
        let row: Vec<f64> = std::iter::once(ev.times[k])
            .chain(entries(s))
            .chain([ev.traces[k], purity(s)])
            .collect();
        table.push_numbers(&row);
    }
    Ok(render(cfg, &table, json!({ "rows": ev.times.len() })))
}

fn trajectories(cfg: &Resolved) -> Result<Rendered, CliError> {
    let (m, rho0) = model_and_state(cfg)?;
    let tc = trajectory_config(cfg);
    let ctx = format!("{}, scheme {:?}, dt={}, n_traj={}, seed={}", describe(cfg, &m), cfg.numerics.scheme, tc.dt, tc.n_traj, tc.seed);
    let dim = m.dim();
    if cfg.numerics.per_trajectory {
        let runs = (0..tc.n_traj as u64)
            .into_par_iter()
            .map(|k| simulate_trajectory(&m, rho0.matrix(), &tc, k))
            .collect::<Result<Vec<_>, _>>()
            .map_err(numerical("dynamics", ctx))?;
        let mut table = Table::new(
            ["trajectory".to_string(), "t".to_string()]
                .into_iter()
                .chain(matrix_columns("rho", dim))
                .chain(["trace".to_string()]),
        );
        let mut truncated = 0;
        for (k, run) in runs.iter().enumerate() {
            truncated += usize::from(run.truncated);
            for i in 0..run.times.len() {
                let row: Vec<f64> = [k as f64, run.times[i]]
                    .into_iter()
                    .chain(entries(run.states[i].matrix()))
                    .chain([run.traces[i]])
                    .collect();
                table.push_numbers(&row);
            }
        }
        return Ok(render(cfg, &table, json!({ "truncated_trajectories": truncated })));
    }
    let ens = simulate_ensemble(&m, rho0.matrix(), &tc).map_err(numerical("dynamics", ctx))?;
    let se_cols: Vec<String> = (0..dim * dim).map(|k| format!("se_{}{}", k / dim, k % dim)).collect();
    let mut table = Table::new(
        std::iter::once("t".to_string())
            .chain(matrix_columns("mean", dim))
            .chain(se_cols)
            .chain(["trace".to_string()]),
    );
    for k in 0..ens.times.len() {
        let row: Vec<f64> = std::iter::once(ens.times[k])
            .chain(entries(ens.mean[k].matrix()))
            .chain(ens.stderr[k].iter().copied())
            .chain([ens.mean[k].trace()])
            .collect();
        table.push_numbers(&row);
    }
    Ok(render(cfg, &table, json!({ "independent_samples": ens.samples })))
}

fn spectrum(cfg: &Resolved) -> Result<Rendered, CliError> {
    let m = build_model(cfg.model.as_ref().expect("resolved"))?;
    let dec = decompose(&build_liouvillian(&m)).map_err(numerical("liouvillian", describe(cfg, &m)))?;
    let pairs = |v: &[antideph::C64]| v.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>();
    let classes: Vec<&str> = dec.classes.iter().map(|c| c.as_str()).collect();
    let mut value = json!({
        "eigenvalues": pairs(&dec.eigenvalues),
        "classes": classes,
        "gap": dec.gap,
        "omega_max": dec.omega_max(),
        "condition": dec.condition,
    });
    if let Some(p) = cfg.sdq() {
        let c = cardano_spectrum(&p);
        value["cardano_eigenvalues"] = json!(pairs(&c.eigenvalues()));
        value["phase"] = json!(p.phase().as_str());
    }
    let data = match cfg.output.format {
        Format::Json => json_out(&value),
        Format::Csv => {
            let mut t = Table::new(["index", "re", "im", "class"]);
            for (k, (z, c)) in dec.eigenvalues.iter().zip(&classes).enumerate() {
                t.push(vec![Field::Num(k as f64), z.re.into(), z.im.into(), (*c).into()]);
            }
            t.to_csv()
        }
    };
    Ok(Rendered { data, extra: json!({}) })
}

fn grid_table(grid: &SweepGrid) -> Table {
    let mut cols = vec![grid.axis1.name.clone(), grid.axis2.name.clone()];
    cols.extend(grid.columns.iter().map(|c| c.to_string()));
    if let Some(l) = grid.label_column {
        cols.push(l.to_string());
    }
    cols.push("status".into());
    let mut table = Table::new(cols);
    for (i, &a) in grid.axis1.values.iter().enumerate() {
        for (k, &b) in grid.axis2.values.iter().enumerate() {
            let cell = grid.cell(i, k);
            let mut row: Vec<Field> = vec![a.into(), b.into()];
            row.extend(cell.values.iter().map(|&v| Field::Num(v)));
            if grid.label_column.is_some() {
                row.push(cell.label.clone().unwrap_or_default().into());
            }
            row.push(match &cell.status {
                CellStatus::Complete => "ok".into(),
                CellStatus::Failed(r) => format!("failed: {r}").into(),
            });
            table.push(row);
        }
    }
    table
}

fn phase_diagram(cfg: &Resolved) -> Result<Rendered, CliError> {
    let s = &cfg.sweep;
    let axis = |name: &str, r: [f64; 2], n| Axis::log(name, r[0], r[1], n).map_err(|e| CliError::Config(format!("sweep: {e}")));
    let g = axis("gammaJ", s.gamma_range, s.grid[0])?;
    let b = axis("GammaOverJ", s.big_gamma_range, s.grid[1])?;
    let grid = sweep_phase_diagram(s.coupling, g, b)
        .map_err(numerical("observables", format!("J={}", s.coupling)))?;
    let failed = grid.failed_count();
    Ok(render(cfg, &grid_table(&grid), json!({ "failed_cells": failed })))
}

fn fidelity_map(cfg: &Resolved) -> Result<Rendered, CliError> {
    let s = &cfg.sweep;
    let b = Axis::linear("GammaOverJ", s.big_gamma_range[0], s.big_gamma_range[1], s.grid[0])
        .map_err(|e| CliError::Config(format!("sweep.Gamma_range: {e}")))?;
    let t = Axis::linear("t", 0.0, s.t_max, s.grid[1]).map_err(|e| CliError::Config(format!("sweep.t_max: {e}")))?;
    let rho0 = initial_state(&cfg.initial_state, 2)?;
    let grid = sweep_fidelity_map(s.coupling, s.noise, b, t, &rho0)
        .map_err(numerical("observables", format!("J={}, gamma={}", s.coupling, s.noise)))?;
    let failed = grid.failed_count();
    Ok(render(cfg, &grid_table(&grid), json!({ "failed_cells": failed })))
}

fn nullcline_table(cfg: &Resolved) -> Result<Rendered, CliError> {
    let p = cfg
        .sdq()
        .ok_or_else(|| CliError::Config("nullclines needs an SDQ model (--sdq)".into()))?;
    let n = cfg.sweep.theta_points;
    let theta = Axis::linear("theta", 0.0, std::f64::consts::PI, n).expect("valid").values;
    let mut curves = nullclines(&p, &theta);
    if !cfg.sweep.signed {
        curves = curves.clipped();
    }
    let mut table = Table::new(["theta", "r_nr", "r_ntheta"]);
    for k in 0..n {
        table.push_numbers(&[curves.theta[k], curves.r_of_r[k], curves.r_of_theta[k]]);
    }
    Ok(render(cfg, &table, json!({})))
}

fn standard_form_json(cfg: &Resolved) -> Result<Rendered, CliError> {
    let m = build_model(cfg.model.as_ref().expect("resolved"))?;
    let ctx = describe(cfg, &m);
    let basis = gell_mann_basis(m.dim());
    let sop = build_liouvillian(&m);
    let proj = project(&sop, &basis).map_err(numerical("liouvillian", ctx.clone()))?;
    let sf = standard_form(&proj.h, &proj.g, &proj.a_coeffs, &proj.ops).map_err(numerical("liouvillian", ctx))?;
    let reconstruction = (sf.generator.matrix() - sop.matrix()).max_abs();
    let value = json!({
        "basis": "gell-mann",
        "h": matrix_json(&proj.h),
        "g": matrix_json(&proj.g),
        "a_coeffs": matrix_json(&proj.a_coeffs),
        "rates": sf.rates,
        "ops": sf.ops.iter().map(matrix_json).collect::<Vec<_>>(),
        "gksl_g": matrix_json(&gksl_g(&proj.a_coeffs, &proj.ops)),
        "reconstruction_error": reconstruction,
    });
    Ok(Rendered {
        data: json_out(&value),
        extra: json!({}),
    })
}
