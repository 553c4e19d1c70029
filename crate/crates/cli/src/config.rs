//! Run configuration: strict JSON schema, flag overrides and default resolution.

use std::path::{Path, PathBuf};

use antideph::dynamics::Scheme;
use antideph::{ComplexMatrix, DensityMatrix, SdqParams, StochNhModel, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Simulate,
    Trajectories,
    Spectrum,
    PhaseDiagram,
    FidelityMap,
    Nullclines,
    StandardForm,
    Validate,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Simulate => "simulate",
            CommandName::Trajectories => "trajectories",
            CommandName::Spectrum => "spectrum",
            CommandName::PhaseDiagram => "phase-diagram",
            CommandName::FidelityMap => "fidelity-map",
            CommandName::Nullclines => "nullclines",
            CommandName::StandardForm => "standard-form",
            CommandName::Validate => "validate",
        }
    }

    fn needs_model(self) -> bool {
        !matches!(self, CommandName::PhaseDiagram | CommandName::FidelityMap)
    }

    fn is_sweep(self) -> bool {
        matches!(
            self,
            CommandName::PhaseDiagram | CommandName::FidelityMap | CommandName::Trajectories
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Rk4,
    Exp,
    Sde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    EulerIto,
    ExpStep,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::EulerIto => Scheme::EulerIto,
            SchemeName::ExpStep => Scheme::ExpStep,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdqSpec {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "Gamma")]
    pub big_gamma: f64,
    pub gamma: f64,
}

/// Matrix as rows of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdq: Option<SdqSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0: Option<JsonMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<JsonMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset_b: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub n_traj: Option<usize>,
    pub seed: Option<u64>,
    pub scheme: Option<SchemeName>,
    pub backend: Option<Backend>,
    pub antithetic: Option<bool>,
    pub per_trajectory: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    /// `"<n1>x<n2>"`.
    pub grid: Option<String>,
    pub gamma_range: Option<[f64; 2]>,
    #[serde(rename = "Gamma_range")]
    pub big_gamma_range: Option<[f64; 2]>,
    pub t_max: Option<f64>,
    pub coupling: Option<f64>,
    pub noise: Option<f64>,
    pub theta_points: Option<usize>,
    pub signed: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandName>,
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub numerics: Numerics,
    /// `f`, `e`, `mixed`, `basis:<k>` or `bloch:<x>,<y>,<z>`.
    pub initial_state: Option<String>,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub output: Output,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("{origin}: line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($dst:expr => $src:expr),* $(,)?) => {
                $(if $src.is_some() { $dst = $src; })*
            };
        }
        take!(
            self.command => other.command,
            self.initial_state => other.initial_state,
            self.threads => other.threads,
            self.numerics.dt => other.numerics.dt,
            self.numerics.t_end => other.numerics.t_end,
            self.numerics.n_traj => other.numerics.n_traj,
            self.numerics.seed => other.numerics.seed,
            self.numerics.scheme => other.numerics.scheme,
            self.numerics.backend => other.numerics.backend,
            self.numerics.antithetic => other.numerics.antithetic,
            self.numerics.per_trajectory => other.numerics.per_trajectory,
            self.sweep.grid => other.sweep.grid,
            self.sweep.gamma_range => other.sweep.gamma_range,
            self.sweep.big_gamma_range => other.sweep.big_gamma_range,
            self.sweep.t_max => other.sweep.t_max,
            self.sweep.coupling => other.sweep.coupling,
            self.sweep.noise => other.sweep.noise,
            self.sweep.theta_points => other.sweep.theta_points,
            self.sweep.signed => other.sweep.signed,
            self.output.path => other.output.path,
            self.output.format => other.output.format,
        );
        if other.model.is_some() {
            self.model = other.model;
        }
        self
    }

    /// Names of every field that is set, as dotted paths.
    fn set_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |set: bool, name| {
            if set {
                out.push(name)
            }
        };
        mark(self.model.is_some(), "model");
        mark(self.initial_state.is_some(), "initial_state");
        let n = &self.numerics;
        mark(n.dt.is_some(), "numerics.dt");
        mark(n.t_end.is_some(), "numerics.t_end");
        mark(n.n_traj.is_some(), "numerics.n_traj");
        mark(n.seed.is_some(), "numerics.seed");
        mark(n.scheme.is_some(), "numerics.scheme");
        mark(n.backend.is_some(), "numerics.backend");
        mark(n.antithetic.is_some(), "numerics.antithetic");
        mark(n.per_trajectory.is_some(), "numerics.per_trajectory");
        let s = &self.sweep;
        mark(s.grid.is_some(), "sweep.grid");
        mark(s.gamma_range.is_some(), "sweep.gamma_range");
        mark(s.big_gamma_range.is_some(), "sweep.Gamma_range");
        mark(s.t_max.is_some(), "sweep.t_max");
        mark(s.coupling.is_some(), "sweep.coupling");
        mark(s.noise.is_some(), "sweep.noise");
        mark(s.theta_points.is_some(), "sweep.theta_points");
        mark(s.signed.is_some(), "sweep.signed");
        out
    }
}

fn allowed_fields(cmd: CommandName) -> &'static [&'static str] {
    match cmd {
        CommandName::Simulate => &[
            "model",
            "initial_state",
            "numerics.dt",
            "numerics.t_end",
            "numerics.backend",
            "numerics.n_traj",
            "numerics.seed",
            "numerics.scheme",
            "numerics.antithetic",
        ],
        CommandName::Trajectories => &[
            "model",
            "initial_state",
            "numerics.dt",
            "numerics.t_end",
            "numerics.n_traj",
            "numerics.seed",
            "numerics.scheme",
            "numerics.antithetic",
            "numerics.per_trajectory",
        ],
        CommandName::Spectrum | CommandName::StandardForm => &["model"],
        CommandName::Nullclines => &["model", "sweep.theta_points", "sweep.signed"],
        CommandName::PhaseDiagram => &[
            "sweep.grid",
            "sweep.gamma_range",
            "sweep.Gamma_range",
            "sweep.coupling",
        ],
        CommandName::FidelityMap => &[
            "initial_state",
            "sweep.grid",
            "sweep.Gamma_range",
            "sweep.t_max",
            "sweep.coupling",
            "sweep.noise",
        ],
        CommandName::Validate => &[
            "model",
            "initial_state",
            "numerics.dt",
            "numerics.t_end",
            "numerics.n_traj",
            "numerics.seed",
            "numerics.scheme",
            "numerics.backend",
            "numerics.antithetic",
            "numerics.per_trajectory",
        ],
    }
}

/// Fully resolved job; every default is explicit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resolved {
    pub command: CommandName,
    pub model: Option<ModelSpec>,
    pub numerics: ResolvedNumerics,
    pub initial_state: String,
    pub sweep: ResolvedSweep,
    pub output: ResolvedOutput,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedNumerics {
    pub dt: f64,
    pub t_end: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub scheme: SchemeName,
    pub backend: Backend,
    pub antithetic: bool,
    pub per_trajectory: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedSweep {
    pub grid: [usize; 2],
    pub gamma_range: [f64; 2],
    #[serde(rename = "Gamma_range")]
    pub big_gamma_range: [f64; 2],
    pub t_max: f64,
    pub coupling: f64,
    pub noise: f64,
    pub theta_points: usize,
    pub signed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedOutput {
    pub path: Option<PathBuf>,
    pub format: Format,
}

fn parse_grid(s: &str) -> Result<[usize; 2], CliError> {
    let bad = || CliError::Config(format!("sweep.grid: expected <n1>x<n2>, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok([a, b])
}

/// Parses `J=1,Gamma=1,gamma=0.05`.
pub fn parse_sdq(s: &str) -> Result<SdqSpec, CliError> {
    let (mut j, mut big, mut small) = (None, None, None);
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--sdq: expected key=value, got {part:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("--sdq: {k} has non-numeric value {v:?}")))?;
        let slot = match k.trim() {
            "J" => &mut j,
            "Gamma" => &mut big,
            "gamma" => &mut small,
            other => {
                return Err(CliError::Config(format!(
                    "--sdq: unknown key {other:?}, expected J, Gamma, gamma"
                )))
            }
        };
        *slot = Some(v);
    }
    match (j, big, small) {
        (Some(j), Some(big_gamma), Some(gamma)) => Ok(SdqSpec {
            j,
            big_gamma,
            gamma,
        }),
        _ => Err(CliError::Config("--sdq: J, Gamma and gamma are all required".into())),
    }
}

fn default_format(cmd: CommandName) -> Format {
    match cmd {
        CommandName::Spectrum | CommandName::StandardForm | CommandName::Validate => Format::Json,
        _ => Format::Csv,
    }
}

fn env_threads() -> Result<Option<usize>, CliError> {
    match std::env::var("ANTIDEPH_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("ANTIDEPH_THREADS: expected a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

impl Resolved {
    pub fn resolve(cfg: RunConfig) -> Result<Self, CliError> {
        let command = cfg
            .command
            .ok_or_else(|| CliError::Config("no command given".into()))?;
        let allowed = allowed_fields(command);
        for field in cfg.set_fields() {
            if !allowed.contains(&field) {
                return Err(CliError::Config(format!(
                    "{field} is not used by the {} command",
                    command.as_str()
                )));
            }
        }
        if command.needs_model() && cfg.model.is_none() {
            return Err(CliError::Config(format!(
                "{} needs a model (--sdq or --model)",
                command.as_str()
            )));
        }
        let threads = match cfg.threads.map(Some).unwrap_or(env_threads()?) {
            Some(0) => return Err(CliError::Config("threads must be positive".into())),
            Some(n) => n,
            None if command.is_sweep() => std::thread::available_parallelism().map_or(1, |n| n.get()),
            None => 1,
        };
        let n = cfg.numerics;
        let s = cfg.sweep;
        let defaults_pd = command == CommandName::PhaseDiagram;
        let format = cfg.output.format.unwrap_or(default_format(command));
        if format == Format::Csv && matches!(command, CommandName::StandardForm | CommandName::Validate) {
            return Err(CliError::Config(format!(
                "output.format: {} only writes json",
                command.as_str()
            )));
        }
        let out = Self {
            command,
            model: cfg.model,
            numerics: ResolvedNumerics {
                dt: n.dt.unwrap_or(1e-3),
                t_end: n.t_end.unwrap_or(10.0),
                n_traj: n.n_traj.unwrap_or(1000),
                seed: n.seed.unwrap_or(0),
                scheme: n.scheme.unwrap_or(SchemeName::ExpStep),
                backend: n.backend.unwrap_or(Backend::Rk4),
                antithetic: n.antithetic.unwrap_or(false),
                per_trajectory: n.per_trajectory.unwrap_or(false),
            },
            initial_state: cfg.initial_state.unwrap_or_else(|| "f".into()),
            sweep: ResolvedSweep {
                grid: parse_grid(s.grid.as_deref().unwrap_or("100x100"))?,
                gamma_range: s.gamma_range.unwrap_or([1e-3, 10.0]),
                big_gamma_range: s
                    .big_gamma_range
                    .unwrap_or(if defaults_pd { [0.1, 100.0] } else { [0.1, 20.0] }),
                t_max: s.t_max.unwrap_or(20.0),
                coupling: s.coupling.unwrap_or(1.0),
                noise: s.noise.unwrap_or(0.05),
                theta_points: s.theta_points.unwrap_or(361),
                signed: s.signed.unwrap_or(false),
            },
            output: ResolvedOutput {
                path: cfg.output.path,
                format,
            },
            threads,
        };
        out.check_values()?;
        Ok(out)
    }

    fn check_values(&self) -> Result<(), CliError> {
        let fail = |field: &str, msg: String| Err(CliError::Config(format!("{field}: {msg}")));
        let n = &self.numerics;
        if !(n.dt > 0.0 && n.dt.is_finite()) {
            return fail("numerics.dt", format!("must be finite and > 0, got {}", n.dt));
        }
        if !(n.t_end >= n.dt && n.t_end.is_finite()) {
            return fail("numerics.t_end", format!("must be finite and >= dt, got {}", n.t_end));
        }
        if n.n_traj == 0 {
            return fail("numerics.n_traj", "must be positive".into());
        }
        if n.antithetic && n.n_traj % 2 == 1 {
            return fail("numerics.n_traj", "must be even with antithetic sampling".into());
        }
        let s = &self.sweep;
        for (name, r, positive) in [
            ("sweep.gamma_range", s.gamma_range, true),
            ("sweep.Gamma_range", s.big_gamma_range, true),
        ] {
            if !(r[0] <= r[1] && r.iter().all(|v| v.is_finite()) && (!positive || r[0] > 0.0)) {
                return fail(name, format!("needs 0 < lo <= hi, got {r:?}"));
            }
        }
        if !(s.t_max >= 0.0 && s.t_max.is_finite()) {
            return fail("sweep.t_max", format!("must be finite and >= 0, got {}", s.t_max));
        }
        if !(s.coupling > 0.0 && s.coupling.is_finite()) {
            return fail("sweep.coupling", format!("must be finite and > 0, got {}", s.coupling));
        }
        if !(s.noise >= 0.0 && s.noise.is_finite()) {
            return fail("sweep.noise", format!("must be finite and >= 0, got {}", s.noise));
        }
        if s.theta_points < 2 {
            return fail("sweep.theta_points", "needs at least 2 points".into());
        }
        Ok(())
    }

    pub fn sdq(&self) -> Option<SdqParams> {
        let spec = self.model.as_ref()?.sdq?;
        SdqParams::new(spec.j, spec.big_gamma, spec.gamma).ok()
    }
}

fn json_matrix(m: &JsonMatrix, field: &str) -> Result<ComplexMatrix, CliError> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(CliError::Config(format!("model.{field}: expected a non-empty square matrix")));
    }
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|row| row.iter().map(|[re, im]| C64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Config(format!("model.{field}: {e}")))
}

/// Raw operators of a descriptor before any physical checks.
pub fn descriptor_parts(spec: &ModelSpec) -> Result<(ComplexMatrix, ComplexMatrix, f64, f64, f64), CliError> {
    if let Some(s) = spec.sdq {
        if spec.h0.is_some() || spec.l.is_some() || spec.gamma.is_some() {
            return Err(CliError::Config("model: give either sdq or h0/l/gamma, not both".into()));
        }
        let p = SdqParams::new(s.j, s.big_gamma, s.gamma)
            .map_err(|e| CliError::Config(format!("model.sdq: {e}")))?;
        let m = p.model();
        return Ok((
            m.h0().clone(),
            m.l_det().clone(),
            m.gamma(),
            spec.offset_a.unwrap_or(0.0),
            spec.offset_b.unwrap_or(0.0),
        ));
    }
    let h0 = json_matrix(
        spec.h0.as_ref().ok_or_else(|| CliError::Config("model.h0: missing".into()))?,
        "h0",
    )?;
    let l = json_matrix(
        spec.l.as_ref().ok_or_else(|| CliError::Config("model.l: missing".into()))?,
        "l",
    )?;
    if l.dim() != h0.dim() {
        return Err(CliError::Config(format!(
            "model.l: dimension {} does not match h0 dimension {}",
            l.dim(),
            h0.dim()
        )));
    }
    let gamma = spec
        .gamma
        .ok_or_else(|| CliError::Config("model.gamma: missing".into()))?;
    Ok((h0, l, gamma, spec.offset_a.unwrap_or(0.0), spec.offset_b.unwrap_or(0.0)))
}

pub fn build_model(spec: &ModelSpec) -> Result<StochNhModel, CliError> {
    let (h0, l, gamma, a, b) = descriptor_parts(spec)?;
    StochNhModel::build(h0, l, gamma)
        .and_then(|m| m.with_offsets(a, b))
        .map_err(|e| CliError::Config(format!("model: {e}")))
}

pub fn initial_state(spec: &str, dim: usize) -> Result<DensityMatrix, CliError> {
    let bad = |msg: String| CliError::Config(format!("initial_state: {msg}"));
    match spec.trim() {
        "f" => Ok(DensityMatrix::basis_state(dim, 0)),
        "e" if dim == 2 => Ok(DensityMatrix::basis_state(dim, 1)),
        "mixed" => Ok(DensityMatrix::maximally_mixed(dim)),
        s => {
            if let Some(k) = s.strip_prefix("basis:") {
                let k: usize = k.parse().map_err(|_| bad(format!("bad basis index {k:?}")))?;
                if k >= dim {
                    return Err(bad(format!("basis index {k} out of range for dimension {dim}")));
                }
                return Ok(DensityMatrix::basis_state(dim, k));
            }
            if let Some(v) = s.strip_prefix("bloch:") {
                if dim != 2 {
                    return Err(bad("Bloch vectors need a qubit model".into()));
                }
                let xs: Vec<f64> = v
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(format!("bad Bloch vector {v:?}")))?;
                let [x, y, z] = xs[..] else {
                    return Err(bad(format!("Bloch vector needs 3 components, got {}", xs.len())));
                };
                return DensityMatrix::from_bloch(x, y, z).map_err(|e| bad(e.to_string()));
            }
            Err(bad(format!(
                "unknown state {s:?}; use f, e, mixed, basis:<k> or bloch:<x>,<y>,<z>"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> Result<RunConfig, CliError> {
        RunConfig::from_json(json, "test")
    }

    #[test]
    fn sdq_shorthand() {
        let s = parse_sdq("J=1,Gamma=2.5,gamma=0.05").unwrap();
        assert_eq!((s.j, s.big_gamma, s.gamma), (1.0, 2.5, 0.05));
        assert!(parse_sdq("J=1,Gamma=2").is_err());
        assert!(parse_sdq("J=1,Gamma=2,gamma=0.1,beta=3").is_err());
        assert!(parse_sdq("J=one,Gamma=2,gamma=0.1").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = cfg("{\n  \"command\": \"spectrum\",\n  \"numerics\": {\"dtt\": 0.1}\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("dtt"), "{msg}");
        assert!(cfg(r#"{"model": {"sdq": {"J": 1, "Gamma": 1, "gamma": 0.1, "x": 2}}}"#).is_err());
    }

    #[test]
    fn defaults_are_resolved() {
        let c = cfg(r#"{"command": "simulate", "model": {"sdq": {"J": 1, "Gamma": 1, "gamma": 0.05}}}"#).unwrap();
        let r = Resolved::resolve(c).unwrap();
        assert_eq!(r.numerics.backend, Backend::Rk4);
        assert_eq!(r.output.format, Format::Csv);
        assert_eq!(r.threads, 1);
        assert_eq!(r.initial_state, "f");
    }

    #[test]
    fn irrelevant_fields_are_rejected() {
        let c = cfg(r#"{"command": "spectrum", "model": {"sdq": {"J": 1, "Gamma": 1, "gamma": 0.05}}, "numerics": {"dt": 0.1}}"#).unwrap();
        assert!(Resolved::resolve(c).unwrap_err().to_string().contains("numerics.dt"));
        let c = cfg(r#"{"command": "simulate"}"#).unwrap();
        assert!(Resolved::resolve(c).is_err());
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = cfg(r#"{"command": "simulate", "numerics": {"dt": 0.1, "t_end": 2}}"#).unwrap();
        let flags = RunConfig {
            numerics: Numerics {
                dt: Some(0.01),
                ..Default::default()
            },
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.numerics.dt, Some(0.01));
        assert_eq!(merged.numerics.t_end, Some(2.0));
    }

    #[test]
    fn descriptor_models() {
        let spec: ModelSpec = serde_json::from_str(
            r#"{"h0": [[[0,0],[1,0]],[[1,0],[0,0]]], "l": [[[0,0],[0,0]],[[0,0],[2,0]]], "gamma": 0.1, "offset_a": 0.5}"#,
        )
        .unwrap();
        let m = build_model(&spec).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.offset_a(), 0.5);
        let bad: ModelSpec = serde_json::from_str(
            r#"{"h0": [[[0,0],[1,1]],[[1,0],[0,0]]], "l": [[[0,0],[0,0]],[[0,0],[2,0]]], "gamma": 0.1}"#,
        )
        .unwrap();
        assert!(build_model(&bad).is_err());
    }

    #[test]
    fn initial_states() {
        assert_eq!(initial_state("e", 2).unwrap().population(1), 1.0);
        assert!((initial_state("bloch:0,0,1", 2).unwrap().population(0) - 1.0).abs() < 1e-15);
        assert!(initial_state("bloch:1,1,1", 2).is_err());
        assert!(initial_state("basis:3", 3).is_err());
        assert!(initial_state("plus", 2).is_err());
    }

    #[test]
    fn grid_spec() {
        assert_eq!(parse_grid("50x40").unwrap(), [50, 40]);
        assert!(parse_grid("50").is_err());
        assert!(parse_grid("0x3").is_err());
    }
}
