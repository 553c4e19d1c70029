mod commands;
mod config;
mod output;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{
    parse_sdq, Backend, CommandName, Format, ModelSpec, Numerics, Output, Resolved, RunConfig, SchemeName, Sweep,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure in {module} ({params}): {source}")]
    Numerical {
        module: &'static str,
        params: String,
        source: antideph::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "antideph", version, about = "Stochastic non-Hermitian dephasing: dynamics, spectra and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deterministic density-matrix evolution (rk4, exp) or ensemble mean (sde).
    Simulate(Flags),
    /// Stochastic trajectory ensemble, as statistics or one row per trajectory sample.
    Trajectories(Flags),
    /// Liouvillian eigenvalues, classes and gap.
    Spectrum(Flags),
    /// Gap, frequency and steady state over a (gamma J, Gamma/J) grid.
    PhaseDiagram(Flags),
    /// Fidelity to the steady state over a (Gamma/J, t) grid.
    FidelityMap(Flags),
    /// Radial and angular nullclines of the Bloch flow.
    Nullclines(Flags),
    /// Hamiltonian, dissipator and diagonal jump operators of the generator.
    StandardForm(Flags),
    /// Checks a configuration without running it.
    Validate(Flags),
    /// Runs the command named in a configuration file.
    Run(Flags),
}

fn parse_range(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok([p(a)?, p(b)?])
}

#[derive(Args, Default)]
struct Flags {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Shorthand model, e.g. J=1,Gamma=1,gamma=0.05.
    #[arg(long, conflicts_with = "model")]
    sdq: Option<String>,
    /// JSON model descriptor with h0, l, gamma and optional offsets.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    n_traj: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Pair trajectories with opposite noise increments.
    #[arg(long)]
    antithetic: bool,
    /// Write every trajectory instead of ensemble statistics.
    #[arg(long)]
    per_trajectory: bool,
    /// f, e, mixed, basis:<k> or bloch:<x>,<y>,<z>.
    #[arg(long)]
    initial: Option<String>,
    /// Sweep grid as <n1>x<n2>.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    gamma_range: Option<[f64; 2]>,
    #[arg(long = "Gamma-range", value_parser = parse_range, allow_hyphen_values = true)]
    big_gamma_range: Option<[f64; 2]>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    coupling: Option<f64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    theta_points: Option<usize>,
    /// Keep nullcline radii outside [0, 1].
    #[arg(long)]
    signed: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SchemeArg {
    EulerIto,
    ExpStep,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum BackendArg {
    Rk4,
    Exp,
    Sde,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl Flags {
    fn to_config(&self) -> Result<RunConfig, CliError> {
        let model = if let Some(s) = &self.sdq {
            Some(ModelSpec {
                sdq: Some(parse_sdq(s)?),
                ..Default::default()
            })
        } else if let Some(path) = &self.model {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            Some(serde_json::from_str::<ModelSpec>(&text).map_err(|e| {
                CliError::Config(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
            })?)
        } else {
            None
        };
        Ok(RunConfig {
            command: None,
            model,
            numerics: Numerics {
                dt: self.dt,
                t_end: self.t_end,
                n_traj: self.n_traj,
                seed: self.seed,
                scheme: self.scheme.map(|s| match s {
                    SchemeArg::EulerIto => SchemeName::EulerIto,
                    SchemeArg::ExpStep => SchemeName::ExpStep,
                }),
                backend: self.backend.map(|b| match b {
                    BackendArg::Rk4 => Backend::Rk4,
                    BackendArg::Exp => Backend::Exp,
                    BackendArg::Sde => Backend::Sde,
                }),
                antithetic: self.antithetic.then_some(true),
                per_trajectory: self.per_trajectory.then_some(true),
            },
            initial_state: self.initial.clone(),
            sweep: Sweep {
                grid: self.grid.clone(),
                gamma_range: self.gamma_range,
                big_gamma_range: self.big_gamma_range,
                t_max: self.t_max,
                coupling: self.coupling,
                noise: self.noise,
                theta_points: self.theta_points,
                signed: self.signed.then_some(true),
            },
            output: Output {
                path: self.output.clone(),
                format: self.format.map(|f| match f {
                    FormatArg::Csv => Format::Csv,
                    FormatArg::Json => Format::Json,
                }),
            },
            threads: self.threads,
        })
    }
}

fn resolve(command: Option<CommandName>, flags: &Flags) -> Result<Resolved, CliError> {
    let base = match &flags.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let (Some(want), Some(have)) = (command, base.command) {
        if want != have {
            return Err(CliError::Config(format!(
                "configuration is for {}, not {}",
                have.as_str(),
                want.as_str()
            )));
        }
    }
    let mut merged = base.overlay(flags.to_config()?);
    if command.is_some() {
        merged.command = command;
    }
    Resolved::resolve(merged)
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    let (command, flags) = match &cli.command {
        Command::Simulate(f) => (Some(CommandName::Simulate), f),
        Command::Trajectories(f) => (Some(CommandName::Trajectories), f),
        Command::Spectrum(f) => (Some(CommandName::Spectrum), f),
        Command::PhaseDiagram(f) => (Some(CommandName::PhaseDiagram), f),
        Command::FidelityMap(f) => (Some(CommandName::FidelityMap), f),
        Command::Nullclines(f) => (Some(CommandName::Nullclines), f),
        Command::StandardForm(f) => (Some(CommandName::StandardForm), f),
        Command::Validate(f) => (Some(CommandName::Validate), f),
        Command::Run(f) => {
            if f.config.is_none() {
                return Err(CliError::Config("run needs --config".into()));
            }
            (None, f)
        }
    };
    let cfg = resolve(command, flags)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    let start = Instant::now();
    if cfg.command == CommandName::Validate {
        let report = validate::validate(&cfg);
        let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
        let extra = serde_json::json!({ "has_errors": report.has_errors() });
        output::emit(&cfg, &text, start.elapsed().as_secs_f64(), extra)?;
        return Ok(ExitCode::SUCCESS);
    }
    let rendered = commands::run(&cfg)?;
    output::emit(&cfg, &rendered.data, start.elapsed().as_secs_f64(), rendered.extra)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("antideph: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
