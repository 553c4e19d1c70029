//! Static checks on a resolved configuration, without running the job.

use antideph::dynamics::{sample_steps, Sampling};
use antideph::liouvillian::build_liouvillian;
use antideph::operator::{eig, min_hermitian_eigenvalue};
use antideph::{tol, StochNhModel};
use serde::Serialize;

use crate::config::{descriptor_parts, initial_state, Backend, Resolved};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub level: Level,
    pub field: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub diagnostics: Vec<Diagnostic>,
    pub estimated_memory_bytes: u64,
}

impl Report {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.level == Level::Error)
    }
}

const MEMORY_WARNING_BYTES: u64 = 8 << 30;

pub fn validate(cfg: &Resolved) -> Report {
    let mut diags = Vec::new();
    let mut push = |level, field: &str, message: String| {
        diags.push(Diagnostic {
            level,
            field: field.into(),
            message,
        })
    };
    let Some(spec) = cfg.model.as_ref() else {
        return Report {
            diagnostics: diags,
            estimated_memory_bytes: 0,
        };
    };
    let (h0, l, gamma, a, b) = match descriptor_parts(spec) {
        Ok(parts) => parts,
        Err(e) => {
            push(Level::Error, "model", e.to_string());
            return Report {
                diagnostics: diags,
                estimated_memory_bytes: 0,
            };
        }
    };
    let dim = h0.dim();
    let mut ok = true;
    for (name, m) in [("model.h0", &h0), ("model.l", &l)] {
        let (defect, i, j) = m.hermiticity_defect();
        if defect > tol::EPS_HERM * m.max_abs().max(1.0) {
            ok = false;
            push(
                Level::Error,
                name,
                format!("not Hermitian: entries ({i}, {j}) and ({j}, {i}) differ by {defect:e} from conjugate symmetry"),
            );
        }
    }
    if ok {
        match min_hermitian_eigenvalue(&l) {
            Ok(min) if min < -tol::EPS_POSITIVE => {
                ok = false;
                push(
                    Level::Error,
                    "model.l",
                    format!("not positive semidefinite: minimum eigenvalue {min:e}"),
                );
            }
            Ok(_) => {}
            Err(e) => {
                ok = false;
                push(Level::Error, "model.l", e.to_string());
            }
        }
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        ok = false;
        push(Level::Error, "model.gamma", format!("must be finite and >= 0, got {gamma}"));
    }
    if !(a.is_finite() && b.is_finite()) {
        ok = false;
        push(Level::Error, "model.offset", "gauge offsets must be finite".into());
    }
    if let Err(e) = initial_state(&cfg.initial_state, dim) {
        push(Level::Error, "initial_state", e.to_string().trim_start_matches("initial_state: ").into());
    }
    if ok {
        let model = StochNhModel::build(h0, l, gamma).and_then(|m| m.with_offsets(a, b));
        match model {
            Ok(m) => step_check(cfg, &m, &mut push),
            Err(e) => push(Level::Error, "model", e.to_string()),
        }
    }
    let bytes = estimate_memory(cfg, dim);
    if bytes > MEMORY_WARNING_BYTES {
        push(
            Level::Warning,
            "numerics",
            format!("estimated memory {:.1} GiB", bytes as f64 / (1u64 << 30) as f64),
        );
    }
    Report {
        diagnostics: diags,
        estimated_memory_bytes: bytes,
    }
}

fn step_check(cfg: &Resolved, m: &StochNhModel, push: &mut impl FnMut(Level, &str, String)) {
    let sop = build_liouvillian(m);
    let scale = match eig(sop.matrix()) {
        Ok(e) => e.values.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Err(e) => {
            push(Level::Warning, "model", format!("spectrum unavailable: {e}"));
            return;
        }
    };
    let dt = cfg.numerics.dt;
    if scale > 0.0 && dt > 1.0 / (10.0 * scale) {
        push(
            Level::Warning,
            "numerics.dt",
            format!(
                "step likely too coarse: dt = {dt} exceeds 1/(10 max|lambda|) = {:e}",
                1.0 / (10.0 * scale)
            ),
        );
    }
}

fn estimate_memory(cfg: &Resolved, dim: usize) -> u64 {
    let n = &cfg.numerics;
    let d2 = (dim * dim) as u64;
    let matrix = 16 * d2;
    let superop = 16 * d2 * d2;
    let steps = (n.t_end / n.dt).round().max(1.0) as usize;
    let samples = sample_steps(steps, Sampling::Auto).len() as u64;
    let per_sample = matrix + 8;
    let mut total = 4 * superop;
    if n.per_trajectory {
        total += n.n_traj as u64 * samples * per_sample;
    } else if n.backend == Backend::Sde || cfg.command == crate::config::CommandName::Trajectories {
        total += samples * (per_sample + 8 * d2 * 2) + rayon::current_num_threads() as u64 * samples * per_sample;
    } else {
        total += samples * (per_sample + 8);
    }
    total
}
