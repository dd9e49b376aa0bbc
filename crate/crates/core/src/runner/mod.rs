//! Command-line runner: argument parsing, config resolution, manifests and
//! atomic output.
//!
//! Exit codes: 0 for ok or warning, 1 for I/O failures, 2 for usage and
//! configuration errors, 3 for numerical aborts. Configuration errors are
//! detected before any file is written.

pub mod config;
pub mod output;
pub mod scenarios;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::ambiguity::PulseShape;
use crate::error::{Error, Result};
use config::*;
use output::{config_hash, emit, write_atomic, Format, OutTarget, RunManifest, RunReport, Status, TOOL_VERSION};

/// Environment variable naming the output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "WGLAB_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "wglab-out";

#[derive(Debug, Parser)]
#[command(name = "wglab", version, about = "Waveguide-analogy electron model laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario configuration (JSON object; unknown keys are rejected).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, or a .csv/.json file for the primary table.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel scenarios.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Physical constants, cutoff, width and Planck scale as JSON.
    Constants {
        #[arg(long)]
        mass: Option<f64>,
    },
    /// Klein-Gordon, Schrödinger and clock-branch dispersion table.
    Dispersion {
        #[arg(long)]
        kmin: Option<f64>,
        #[arg(long)]
        kmax: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        fo: Option<f64>,
    },
    /// Leapfrog Klein-Gordon run, or evanescent decay with --drive.
    Kg {
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        fo: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        drive: Option<f64>,
    },
    /// Scattering and bound states of 1D potentials.
    Stationary {
        #[command(subcommand)]
        action: StationaryCommand,
    },
    /// Quantum potential profiles and polar-form residuals.
    Bohm {
        #[command(subcommand)]
        action: BohmCommand,
    },
    /// NLS, Gross-Pitaevskii or Q-cancelling evolution.
    Soliton {
        #[arg(long, value_enum)]
        eq: Option<EquationKind>,
    },
    /// Hidden-phase Monte Carlo against the wave transmission.
    Zigzag {
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long = "E", alias = "energy")]
        energy: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Ambiguity surface of a pulse, or its widths.
    Ambiguity {
        #[arg(long, value_enum)]
        shape: Option<ShapeArg>,
        #[command(subcommand)]
        action: Option<AmbiguityCommand>,
    },
    /// Bohr orbit table with the extra-arc quantization number.
    Bohr {
        /// `n` or `a..b`.
        #[arg(long)]
        n: Option<String>,
    },
    /// Regenerates the figure and number data.
    Repro {
        #[arg(value_enum)]
        target: ReproTarget,
    },
}

#[derive(Debug, Subcommand)]
pub enum StationaryCommand {
    Scatter {
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long = "E", alias = "energy")]
        energy: Option<f64>,
    },
    Bound {
        #[arg(long)]
        potential: Option<PathBuf>,
        /// Number of states.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BohmCommand {
    /// Q(z) for a sech or Gaussian envelope.
    Qp {
        #[arg(long, value_enum)]
        profile: Option<Profile>,
        #[arg(long)]
        a: Option<f64>,
    },
    /// Hamilton-Jacobi and continuity residuals of a soliton run.
    Residuals {
        /// Soliton run configuration.
        #[arg(long)]
        run: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum AmbiguityCommand {
    Widths {
        #[arg(long, value_enum)]
        shape: Option<ShapeArg>,
        #[arg(long)]
        corpus: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Gaussian,
    Sech,
    Rectangular,
}

impl From<ShapeArg> for PulseShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Gaussian => PulseShape::Gaussian,
            ShapeArg::Sech => PulseShape::Sech,
            ShapeArg::Rectangular => PulseShape::Rectangular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReproTarget {
    #[value(name = "fig5.1")]
    Fig51,
    #[value(name = "fig7.2")]
    Fig72,
    Width,
    Planck,
    BohrTable,
    All,
}

impl ReproTarget {
    const EACH: [ReproTarget; 5] =
        [ReproTarget::Fig51, ReproTarget::Fig72, ReproTarget::Width, ReproTarget::Planck, ReproTarget::BohrTable];

    pub fn name(self) -> &'static str {
        match self {
            ReproTarget::Fig51 => "fig5.1",
            ReproTarget::Fig72 => "fig7.2",
            ReproTarget::Width => "width",
            ReproTarget::Planck => "planck",
            ReproTarget::BohrTable => "bohr-table",
            ReproTarget::All => "all",
        }
    }
}

/// A resolved scenario ready to execute.
struct Job {
    name: String,
    config: Value,
    seed: Option<u64>,
    target: OutTarget,
    task: Box<dyn FnOnce() -> Result<RunReport> + Send>,
}

/// What a finished run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub manifests: Vec<RunManifest>,
    pub reports: Vec<RunReport>,
}

fn resolve<C: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<C> {
    match path {
        Some(p) => load_config(p),
        None => Ok(C::default()),
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn job<C>(name: &str, cfg: C, seed: Option<u64>, target: &OutTarget, f: fn(&C) -> Result<RunReport>) -> Result<Job>
where
    C: Serialize + Send + 'static,
{
    Ok(Job {
        name: name.to_string(),
        config: serde_json::to_value(&cfg)?,
        seed,
        target: target.clone(),
        task: Box::new(move || f(&cfg)),
    })
}

fn plan(cli: Cli, target: &OutTarget) -> Result<Vec<Job>> {
    let c = &cli.common;
    let jobs = match cli.command {
        Command::Constants { mass } => {
            let mut cfg: ConstantsConfig = resolve(&c.config)?;
            set(&mut cfg.mass, mass);
            vec![job("constants", cfg, None, target, scenarios::constants)?]
        }
        Command::Dispersion { kmin, kmax, n, fo } => {
            let mut cfg: DispersionConfig = resolve(&c.config)?;
            set(&mut cfg.k_min, kmin);
            set(&mut cfg.k_max, kmax);
            set(&mut cfg.n, n);
            set(&mut cfg.f_o, fo);
            vec![job("dispersion", cfg, None, target, scenarios::dispersion)?]
        }
        Command::Kg { k, fo, steps, drive } => {
            let mut cfg: KgConfig = resolve(&c.config)?;
            set(&mut cfg.k, k);
            set(&mut cfg.f_o, fo);
            if steps.is_some() {
                cfg.steps = steps;
            }
            if drive.is_some() {
                cfg.drive = drive;
            }
            vec![job("kg", cfg, None, target, scenarios::kg)?]
        }
        Command::Stationary { action: StationaryCommand::Scatter { potential, energy } } => {
            let mut cfg: ScatterConfig = resolve(&c.config)?;
            if let Some(p) = potential {
                cfg.potential = load_config(&p)?;
            }
            set(&mut cfg.energy, energy);
            vec![job("stationary scatter", cfg, None, target, scenarios::scatter)?]
        }
        Command::Stationary { action: StationaryCommand::Bound { potential, n } } => {
            let mut cfg: BoundConfig = resolve(&c.config)?;
            if let Some(p) = potential {
                cfg.potential = load_config(&p)?;
            }
            set(&mut cfg.n_states, n);
            vec![job("stationary bound", cfg, None, target, scenarios::bound)?]
        }
        Command::Bohm { action: BohmCommand::Qp { profile, a } } => {
            let mut cfg: QpConfig = resolve(&c.config)?;
            set(&mut cfg.profile, profile);
            set(&mut cfg.a, a);
            vec![job("bohm qp", cfg, None, target, scenarios::quantum_potential_profile)?]
        }
        Command::Bohm { action: BohmCommand::Residuals { run } } => {
            let mut cfg: SolitonConfig = load_config(&run)?;
            set(&mut cfg.seed, c.seed);
            let seed = Some(cfg.seed);
            vec![job("bohm residuals", cfg, seed, target, scenarios::bohm_residuals)?]
        }
        Command::Soliton { eq } => {
            let mut cfg: SolitonConfig = resolve(&c.config)?;
            set(&mut cfg.equation, eq);
            set(&mut cfg.seed, c.seed);
            let seed = Some(cfg.seed);
            vec![job("soliton", cfg, seed, target, scenarios::soliton)?]
        }
        Command::Zigzag { potential, energy, n } => {
            let mut cfg: ZigzagConfig = resolve(&c.config)?;
            if let Some(p) = potential {
                cfg.potential = load_config(&p)?;
            }
            set(&mut cfg.energy, energy);
            set(&mut cfg.n, n);
            set(&mut cfg.seed, c.seed);
            let seed = Some(cfg.seed);
            vec![job("zigzag", cfg, seed, target, scenarios::zigzag)?]
        }
        Command::Ambiguity { shape, action: None } => {
            let mut cfg: SurfaceConfig = resolve(&c.config)?;
            set(&mut cfg.shape, shape.map(Into::into));
            vec![job("ambiguity", cfg, None, target, scenarios::ambiguity)?]
        }
        Command::Ambiguity { shape, action: Some(AmbiguityCommand::Widths { shape: inner, corpus }) } => {
            let mut cfg: WidthsConfig = resolve(&c.config)?;
            set(&mut cfg.shape, inner.or(shape).map(Into::into));
            set(&mut cfg.corpus, corpus);
            set(&mut cfg.seed, c.seed);
            let seed = (cfg.corpus > 0).then_some(cfg.seed);
            vec![job("ambiguity widths", cfg, seed, target, scenarios::widths)?]
        }
        Command::Bohr { n } => {
            let mut cfg: BohrConfig = resolve(&c.config)?;
            if let Some(s) = n {
                let (a, b) = parse_n_range(&s)?;
                cfg.n_min = a;
                cfg.n_max = b;
            }
            vec![job("bohr", cfg, None, target, scenarios::bohr)?]
        }
        Command::Repro { target: which } => {
            if c.config.is_some() {
                return Err(Error::config("repro targets are fixed and take no --config"));
            }
            let each: Vec<ReproTarget> =
                if which == ReproTarget::All { ReproTarget::EACH.to_vec() } else { vec![which] };
            each.into_iter()
                .map(|t| {
                    let dest = if which == ReproTarget::All { target.join(t.name()) } else { target.clone() };
                    let f: fn(&()) -> Result<RunReport> = match t {
                        ReproTarget::Fig51 => |_| scenarios::fig5_1(),
                        ReproTarget::Fig72 => |_| scenarios::fig7_2(),
                        ReproTarget::Width => |_| scenarios::width_check(),
                        ReproTarget::Planck => |_| scenarios::planck(),
                        ReproTarget::BohrTable => |_| scenarios::bohr(&BohrConfig::default()),
                        ReproTarget::All => unreachable!("expanded above"),
                    };
                    job(&format!("repro {}", t.name()), (), None, &dest, f)
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(jobs)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NumericalAbort(_) => 3,
        Error::Io(_) => 1,
        Error::Domain(_) | Error::Config(_) | Error::Json(_) => 2,
    }
}

fn execute_job(job: Job, format: Format) -> Result<(RunManifest, RunReport, i32)> {
    let start = Instant::now();
    let (report, code) = match (job.task)() {
        Ok(r) => (r, 0),
        Err(Error::NumericalAbort(msg)) => (RunReport::aborted(msg), 3),
        Err(e) => return Err(e),
    };
    let written = emit(&report, &job.target, format)?;
    let manifest = RunManifest {
        config_hash: config_hash(&job.name, &job.config, job.seed),
        subcommand: job.name,
        seed: job.seed,
        tool_version: TOOL_VERSION.to_string(),
        outputs: written.iter().map(|p| p.display().to_string()).collect(),
        wall_time: start.elapsed().as_secs_f64(),
        config: job.config,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write_atomic(&job.target.manifest_path(), text.as_bytes())?;
    Ok((manifest, report, code))
}

/// Parses `argv` (including the program name) and runs the scenario.
///
/// Usage errors are returned as `Err` with clap's rendered message; help and
/// version requests come back as `Ok` with exit code 0 and no manifests.
pub fn execute<I, T>(argv: I) -> std::result::Result<RunOutcome, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                print!("{text}");
                return Ok(RunOutcome { exit_code: 0, manifests: vec![], reports: vec![] });
            }
            return Err((2, text));
        }
    };
    let format = cli.common.format;
    let threads = cli.common.threads;
    let out = cli
        .common
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|s| !s.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let target = OutTarget::parse(out);
    let fail = |e: Error| (exit_code(&e), format!("error: {e}"));
    let jobs = plan(cli, &target).map_err(fail)?;
    let pool = match threads {
        Some(0) => return Err(fail(Error::config("--threads must be at least 1"))),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    }
    .map_err(|e| fail(Error::config(format!("cannot start thread pool: {e}"))))?;
    let mut outcome = RunOutcome { exit_code: 0, manifests: vec![], reports: vec![] };
    for job in jobs {
        let (m, r, code) = pool.install(|| execute_job(job, format)).map_err(fail)?;
        outcome.exit_code = outcome.exit_code.max(code);
        outcome.manifests.push(m);
        outcome.reports.push(r);
    }
    Ok(outcome)
}

/// Entry point for the binary: runs, prints diagnostics, returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(argv) {
        Ok(outcome) => {
            for (m, r) in outcome.manifests.iter().zip(&outcome.reports) {
                let tag = match r.status {
                    Status::Ok => "ok",
                    Status::Warning => "warning",
                    Status::Aborted => "aborted",
                };
                eprintln!("{}: {tag}, {} file(s)", m.subcommand, m.outputs.len());
                for d in &r.diagnostics {
                    eprintln!("  {d}");
                }
            }
            outcome.exit_code
        }
        Err((code, message)) => {
            eprint!("{message}");
            if !message.ends_with('\n') {
                eprintln!();
            }
            code
        }
    }
}
