//! Command-line front end. Parses flags into a [`RunConfig`], runs one
//! analysis and writes JSON reports and CSV traces into the output directory.
//!
//! Exit codes: 0 success, 1 parse/validation error, 2 numerical failure,
//! 3 instability or divergence detected (reports are still written).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::io::{self, IoError, SignalSpec, SystemSpec};
use crate::linalg::{mat_exp, operator_norm_2, spectral_abscissa, Vector};
use crate::model::{SwitchedSystem, Weights};
use crate::presets;
use crate::signals::{example_signal, NormMinPolicy, PeriodicSignal};
use crate::simulate::{self, Trajectory};
use crate::stability::{self, StabilityReport};
use crate::synthesis::{self, CombinationResult, EtaSearchResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "switchstab",
    version,
    about = "Periodic stabilisation of switched affine systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// System JSON file
    #[arg(long, global = true)]
    pub system: Option<PathBuf>,
    /// Signal JSON file
    #[arg(long, global = true)]
    pub signal: Option<PathBuf>,
    /// Dwell-time scale applied to the signal
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    /// Sample spacing (norm-min policy step for `normmin`)
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Number of initial conditions on the unit circle
    #[arg(long, global = true)]
    pub circle: Option<usize>,
    /// JSON file holding a list of initial states
    #[arg(long, global = true)]
    pub init: Option<PathBuf>,
    /// Tolerance override NAME=VALUE (repeatable)
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Comma-separated k grid for the commutator bound
    #[arg(long = "k-list", global = true)]
    pub k_list: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Spectral stability report for a system under a periodic signal
    Analyze,
    /// Stable convex combination and largest stabilising dwell scale
    Synthesize,
    /// Trajectories under a periodic signal
    Simulate,
    /// Limit cycle of an affine system under a periodic signal
    Cycle,
    /// Trajectories under the sampled norm-minimising policy
    Normmin,
    /// Write and analyse one of the bundled systems (1 or 2)
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
}

/// Tunable numerical parameters, overridable with `--tol NAME=VALUE`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub equilibrium_tol: f64,
    pub resolution: f64,
    pub refine: bool,
    pub grid_points: usize,
    pub refine_tol: f64,
    pub eta_max: Option<f64>,
    pub orbit_samples: usize,
    pub divergence_guard: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equilibrium_tol: 1e-9,
            resolution: 0.01,
            refine: true,
            grid_points: 200,
            refine_tol: 1e-6,
            eta_max: None,
            orbit_samples: 400,
            divergence_guard: simulate::DIVERGENCE_GUARD,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (name, value) = assignment.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("--tol expects NAME=VALUE, got {assignment:?}"))
        })?;
        let bad = |_| CliError::Usage(format!("bad value for {name}: {value:?}"));
        match name.trim() {
            "equilibrium_tol" => self.equilibrium_tol = value.parse().map_err(bad)?,
            "resolution" => self.resolution = value.parse().map_err(bad)?,
            "refine" => {
                self.refine = value
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad value for refine: {value:?}")))?
            }
            "grid_points" => {
                self.grid_points = value
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad value for grid_points: {value:?}")))?
            }
            "refine_tol" => self.refine_tol = value.parse().map_err(bad)?,
            "eta_max" => self.eta_max = Some(value.parse().map_err(bad)?),
            "orbit_samples" => {
                self.orbit_samples = value.parse().map_err(|_| {
                    CliError::Usage(format!("bad value for orbit_samples: {value:?}"))
                })?
            }
            "divergence_guard" => self.divergence_guard = value.parse().map_err(bad)?,
            other => return Err(CliError::Usage(format!("unknown tolerance {other:?}"))),
        }
        Ok(())
    }
}

/// Fully resolved invocation; echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub system_path: Option<PathBuf>,
    pub signal_path: Option<PathBuf>,
    pub eta: Option<f64>,
    pub t_end: Option<f64>,
    pub sample_dt: Option<f64>,
    pub output_dir: PathBuf,
    pub circle: Option<usize>,
    pub init_path: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub k_list: Vec<u32>,
}

impl RunConfig {
    pub fn new(command: Command, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            command,
            system_path: None,
            signal_path: None,
            eta: None,
            t_end: None,
            sample_dt: None,
            output_dir: output_dir.into(),
            circle: None,
            init_path: None,
            tolerances: Tolerances::default(),
            k_list: stability::default_k_grid(),
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let mut tolerances = Tolerances::default();
        for t in &cli.tol {
            tolerances.set(t)?;
        }
        let k_list = match &cli.k_list {
            None => stability::default_k_grid(),
            Some(s) => s
                .split(',')
                .map(|k| {
                    k.trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|&k| k > 0)
                        .ok_or_else(|| CliError::Usage(format!("bad k in --k-list: {k:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let config = Self {
            command: cli.command,
            system_path: cli.system,
            signal_path: cli.signal,
            eta: cli.eta,
            t_end: cli.t_end,
            sample_dt: cli.dt,
            output_dir: cli.out,
            circle: cli.circle,
            init_path: cli.init,
            tolerances,
            k_list,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("eta", self.eta),
            ("t-end", self.t_end),
            ("dt", self.sample_dt),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(CliError::Usage(format!(
                        "--{name} must be positive, got {v}"
                    )));
                }
            }
        }
        if self.circle == Some(0) {
            return Err(CliError::Usage("--circle needs at least one point".into()));
        }
        if self.k_list.is_empty() {
            return Err(CliError::Usage("--k-list is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] IoError),
    #[error("{0}")]
    Model(#[source] Error),
    #[error("writing {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => 2,
            CliError::Model(e) if e.is_instability() => 3,
            CliError::Write { .. } => 2,
            _ => 1,
        }
    }
}

/// Files written and the exit status of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub written: Vec<PathBuf>,
}

struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
        s.push('\n');
        self.text(name, &s)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn envelope<'a, T: Serialize>(config: &'a RunConfig, body: T) -> Envelope<'a, T> {
    Envelope {
        tool: "switchstab",
        version: TOOL_VERSION,
        config,
        body,
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match RunConfig::from_cli(cli).and_then(|c| run(&c)) {
        Ok(outcome) => outcome.exit_code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command described by `config`.
pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let mut out = Output::new(&config.output_dir)?;
    let exit_code = match config.command {
        Command::Analyze => {
            let system = load_system(config)?;
            let (shape, eta) = load_signal(config, &system)?;
            analyze(config, &system, &shape, eta, &mut out)?
        }
        Command::Synthesize => synthesize(config, &load_system(config)?, &mut out)?,
        Command::Simulate => {
            let system = load_system(config)?;
            let (shape, eta) = load_signal(config, &system)?;
            simulate_cmd(config, &system, &shape, eta, &mut out)?
        }
        Command::Cycle => {
            let system = load_system(config)?;
            let (shape, eta) = load_signal(config, &system)?;
            cycle_cmd(config, &system, &shape, eta, &mut out)?
        }
        Command::Normmin => normmin(config, &load_system(config)?, &mut out)?,
        Command::Example { which } => example(config, which, &mut out)?,
    };
    Ok(RunOutcome {
        exit_code,
        written: out.written,
    })
}

fn load_system(config: &RunConfig) -> Result<SwitchedSystem, CliError> {
    let path = config
        .system_path
        .as_ref()
        .ok_or_else(|| CliError::Usage("--system is required".into()))?;
    Ok(io::load_system(path)?)
}

/// Signal shape and effective scale. Without `--signal`, every subsystem runs
/// for one time unit in index order. `--eta` overrides the file's `eta`.
fn load_signal(
    config: &RunConfig,
    system: &SwitchedSystem,
) -> Result<(PeriodicSignal, f64), CliError> {
    let (shape, file_eta) = match &config.signal_path {
        Some(path) => io::load_signal(path)?,
        None => (PeriodicSignal::round_robin(system.len(), 1.0)?, 1.0),
    };
    shape.validate_for(system.len())?;
    Ok((shape, config.eta.unwrap_or(file_eta)))
}

fn initial_conditions(config: &RunConfig, n: usize) -> Result<Vec<Vector>, CliError> {
    if let Some(path) = &config.init_path {
        let text = fs::read_to_string(path).map_err(|source| IoError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let states: Vec<Vector> = serde_json::from_str(&text).map_err(|source| IoError::Parse {
            path: path.display().to_string(),
            source,
        })?;
        if states.is_empty() {
            return Err(CliError::Usage("initial condition list is empty".into()));
        }
        if let Some(bad) = states.iter().find(|x| x.len() != n) {
            return Err(CliError::Usage(format!(
                "initial state has dimension {}, system has {n}",
                bad.len()
            )));
        }
        return Ok(states);
    }
    let k = config.circle.unwrap_or(8);
    Ok(match n {
        1 => (0..k)
            .map(|j| Vector::from_raw(vec![if j % 2 == 0 { 1.0 } else { -1.0 }]))
            .collect(),
        _ => simulate::unit_circle_points(k)
            .into_iter()
            .map(|p| {
                let mut v = p.into_vec();
                v.resize(n, 0.0);
                Vector::from_raw(v)
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct BoundSummary {
    k_list: Vec<u32>,
    holds: bool,
    terms: Vec<stability::BoundTerm>,
}

#[derive(Serialize)]
struct AverageApproximation {
    horizon: f64,
    bound: f64,
    measured: f64,
}

#[derive(Serialize)]
struct AnalyzeBody {
    #[serde(flatten)]
    stability: StabilityReport,
    activation_fractions: Vec<f64>,
    min_dwell: f64,
    mean_dwell: f64,
    average_abscissa: f64,
    bch_c2: crate::linalg::Matrix,
    commutator_bound: BoundSummary,
    average_approximation: AverageApproximation,
}

fn analysis(
    config: &RunConfig,
    system: &SwitchedSystem,
    shape: &PeriodicSignal,
    eta: f64,
) -> Result<AnalyzeBody, CliError> {
    let stability = stability::is_ici_stable_at(system, shape, eta)?;
    let signal = shape.scale(eta)?;
    let weights = signal.activation_fractions(system.len())?;
    let avg = system.average_system(&weights)?;
    let c2 = stability::bch_c2_for_signal(system, &signal)?;
    let terms = stability::lemma4_terms_for_signal(system, &signal, &config.k_list)?;

    let horizon = 1.0;
    let phi = stability::transition_matrix(system, &signal, horizon)?;
    let measured = operator_norm_2(&(&phi - &mat_exp(&avg.a().scaled(horizon))?))?;
    let bound = stability::average_error_bound(avg.a(), &c2, signal.period(), horizon)?;

    Ok(AnalyzeBody {
        stability,
        activation_fractions: weights.alpha().to_vec(),
        min_dwell: signal.min_dwell(),
        mean_dwell: signal.mean_dwell(),
        average_abscissa: spectral_abscissa(avg.a())?,
        bch_c2: c2,
        commutator_bound: BoundSummary {
            k_list: config.k_list.clone(),
            holds: terms.iter().all(stability::BoundTerm::holds),
            terms,
        },
        average_approximation: AverageApproximation {
            horizon,
            bound,
            measured,
        },
    })
}

fn analyze(
    config: &RunConfig,
    system: &SwitchedSystem,
    shape: &PeriodicSignal,
    eta: f64,
    out: &mut Output,
) -> Result<i32, CliError> {
    let body = analysis(config, system, shape, eta)?;
    let stable = body.stability.is_stable;
    out.json("analyze.json", &envelope(config, body))?;
    Ok(if stable { 0 } else { 3 })
}

#[derive(Serialize)]
struct SynthesizeBody {
    combination: CombinationResult,
    eta_search: Option<EtaSearchResult>,
    /// What `eta_star` means.
    eta_star_note: &'static str,
}

fn synthesize(
    config: &RunConfig,
    system: &SwitchedSystem,
    out: &mut Output,
) -> Result<i32, CliError> {
    let tol = &config.tolerances;
    let combination =
        synthesis::find_stable_combination(&system.matrices(), tol.resolution, tol.refine)?;
    let eta_search = if combination.found {
        let eta_max = match tol.eta_max {
            Some(v) => v,
            None => synthesis::default_eta_max(system, &combination.weights)?,
        };
        Some(synthesis::max_stable_eta(
            system,
            &combination.weights,
            eta_max,
            tol.grid_points,
            tol.refine_tol,
        )?)
    } else {
        None
    };
    if let Some(search) = &eta_search {
        let mut csv = String::from("eta,spectral_radius\n");
        for (eta, rho) in &search.grid {
            csv.push_str(&format!("{eta},{rho}\n"));
        }
        out.text("eta_grid.csv", &csv)?;
    }
    let found = combination.found;
    out.json(
        "synthesize.json",
        &envelope(
            config,
            SynthesizeBody {
                combination,
                eta_search,
                eta_star_note: "numerical estimate of the dwell-scale bound below which the constructed signal stabilises",
            },
        ),
    )?;
    Ok(if found { 0 } else { 3 })
}

#[derive(Serialize)]
struct RunSummary {
    initial: Vector,
    final_time: f64,
    final_state: Option<Vector>,
    diverged: bool,
    switches: usize,
    csv: String,
}

fn summarise(
    index: usize,
    prefix: &str,
    x0: Vector,
    result: Result<Trajectory, Error>,
    out: &mut Output,
) -> Result<RunSummary, CliError> {
    let (traj, diverged) = match result {
        Ok(t) => (t, None),
        Err(Error::Diverged {
            time, trajectory, ..
        }) => (*trajectory, Some(time)),
        Err(e) => return Err(e.into()),
    };
    let name = format!("{prefix}_{:03}.csv", index + 1);
    out.text(&name, &traj.to_csv())?;
    let switches = traj
        .samples
        .windows(2)
        .filter(|w| w[0].active != w[1].active)
        .count();
    Ok(RunSummary {
        initial: x0,
        final_time: diverged.unwrap_or_else(|| traj.last().map_or(0.0, |s| s.t)),
        final_state: if diverged.is_some() {
            None
        } else {
            traj.last().map(|s| s.x.clone())
        },
        diverged: diverged.is_some(),
        switches,
        csv: name,
    })
}

#[derive(Serialize)]
struct SimulateBody {
    eta: f64,
    t_end: f64,
    sample_dt: f64,
    runs: Vec<RunSummary>,
}

fn simulate_cmd(
    config: &RunConfig,
    system: &SwitchedSystem,
    shape: &PeriodicSignal,
    eta: f64,
    out: &mut Output,
) -> Result<i32, CliError> {
    let t_end = config.t_end.unwrap_or(60.0);
    let dt = config.sample_dt.unwrap_or(0.01);
    let signal = shape.scale(eta)?;
    let mut runs = Vec::new();
    for (j, x0) in initial_conditions(config, system.dim())?
        .into_iter()
        .enumerate()
    {
        let result = simulate::simulate_with_guard(
            system,
            &signal,
            &x0,
            t_end,
            dt,
            config.tolerances.divergence_guard,
        );
        runs.push(summarise(j, "trajectory", x0, result, out)?);
    }
    let diverged = runs.iter().any(|r| r.diverged);
    out.json(
        "simulate.json",
        &envelope(
            config,
            SimulateBody {
                eta,
                t_end,
                sample_dt: dt,
                runs,
            },
        ),
    )?;
    Ok(if diverged { 3 } else { 0 })
}

#[derive(Serialize)]
struct CycleBody {
    eta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle: Option<CycleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct CycleSummary {
    fixed_point: Vector,
    period: f64,
    spectral_radius: f64,
    average_equilibrium: Option<Vector>,
    practical_radius: Option<f64>,
    orbit_diameter: f64,
    orbit_csv: &'static str,
}

fn cycle_cmd(
    config: &RunConfig,
    system: &SwitchedSystem,
    shape: &PeriodicSignal,
    eta: f64,
    out: &mut Output,
) -> Result<i32, CliError> {
    let signal = shape.scale(eta)?;
    match simulate::limit_cycle(system, &signal, config.tolerances.orbit_samples) {
        Ok(cycle) => {
            let n = system.dim();
            let mut csv = String::from("t");
            for i in 1..=n {
                csv.push_str(&format!(",x{i}"));
            }
            csv.push('\n');
            for (t, x) in &cycle.orbit {
                csv.push_str(&t.to_string());
                for v in x.as_slice() {
                    csv.push(',');
                    csv.push_str(&v.to_string());
                }
                csv.push('\n');
            }
            out.text("orbit.csv", &csv)?;
            let summary = CycleSummary {
                orbit_diameter: cycle.diameter(),
                fixed_point: cycle.fixed_point,
                period: cycle.period,
                spectral_radius: cycle.spectral_radius,
                average_equilibrium: cycle.average_equilibrium,
                practical_radius: cycle.practical_radius,
                orbit_csv: "orbit.csv",
            };
            out.json(
                "cycle.json",
                &envelope(
                    config,
                    CycleBody {
                        eta,
                        cycle: Some(summary),
                        error: None,
                    },
                ),
            )?;
            Ok(0)
        }
        Err(e @ Error::NoAttractingCycle { .. }) => {
            out.json(
                "cycle.json",
                &envelope(
                    config,
                    CycleBody {
                        eta,
                        cycle: None,
                        error: Some(e.to_string()),
                    },
                ),
            )?;
            Ok(3)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct NormMinBody {
    step: f64,
    t_end: f64,
    runs: Vec<RunSummary>,
}

fn normmin(config: &RunConfig, system: &SwitchedSystem, out: &mut Output) -> Result<i32, CliError> {
    let t_end = config.t_end.unwrap_or(30.0);
    let policy = NormMinPolicy::new(config.sample_dt.unwrap_or(1e-3))?;
    let mut runs = Vec::new();
    for (j, x0) in initial_conditions(config, system.dim())?
        .into_iter()
        .enumerate()
    {
        let result = simulate::simulate_norm_min_with_guard(
            system,
            &x0,
            t_end,
            &policy,
            config.tolerances.divergence_guard,
        );
        runs.push(summarise(j, "normmin", x0, result, out)?);
    }
    let diverged = runs.iter().any(|r| r.diverged);
    out.json(
        "normmin.json",
        &envelope(
            config,
            NormMinBody {
                step: policy.step(),
                t_end,
                runs,
            },
        ),
    )?;
    Ok(if diverged { 3 } else { 0 })
}

#[derive(Serialize)]
struct ExampleBody {
    example: u8,
    eta: f64,
    common_equilibrium: Option<Vector>,
    subsystem_equilibria: Vec<Vector>,
    average_equilibrium: Vector,
    exit_codes: BTreeMap<&'static str, i32>,
}

fn example(config: &RunConfig, which: u8, out: &mut Output) -> Result<i32, CliError> {
    let (system, default_eta) = match which {
        1 => (presets::example_one(), 1.1),
        2 => (presets::example_two(), 0.5),
        other => return Err(CliError::Usage(format!("no bundled example {other}"))),
    };
    let eta = config.eta.unwrap_or(default_eta);
    let shape = example_signal(1.0)?;
    out.json("system.json", &SystemSpec::from_system(&system))?;
    out.json("signal.json", &SignalSpec::from_signal(&shape, eta))?;

    let mut exit_codes = BTreeMap::new();
    exit_codes.insert("analyze", analyze(config, &system, &shape, eta, out)?);
    if which == 2 {
        exit_codes.insert("cycle", cycle_cmd(config, &system, &shape, eta, out)?);
    }
    exit_codes.insert("simulate", simulate_cmd(config, &system, &shape, eta, out)?);

    let weights = Weights::uniform(2, 1.0)?;
    let body = ExampleBody {
        example: which,
        eta,
        common_equilibrium: system.common_equilibrium(config.tolerances.equilibrium_tol)?,
        subsystem_equilibria: system.equilibria()?,
        average_equilibrium: system.average_system(&weights)?.equilibrium()?,
        exit_codes: exit_codes.clone(),
    };
    out.json("example.json", &envelope(config, body))?;
    Ok(exit_codes.values().copied().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("resolution=0.05").unwrap();
        t.set("eta_max=3").unwrap();
        t.set("refine=false").unwrap();
        assert_eq!(t.resolution, 0.05);
        assert_eq!(t.eta_max, Some(3.0));
        assert!(!t.refine);
        assert!(t.set("nonsense=1").is_err());
        assert!(t.set("resolution").is_err());
        assert!(t.set("grid_points=abc").is_err());
    }

    #[test]
    fn flags_parse_after_subcommand() {
        let cli = Cli::try_parse_from([
            "switchstab",
            "example",
            "1",
            "--eta",
            "1.1",
            "--k-list",
            "1,2,4",
        ])
        .unwrap();
        let config = RunConfig::from_cli(cli).unwrap();
        assert_eq!(config.command, Command::Example { which: 1 });
        assert_eq!(config.eta, Some(1.1));
        assert_eq!(config.k_list, vec![1, 2, 4]);
    }

    #[test]
    fn invalid_flags_are_usage_errors() {
        let cli = Cli::try_parse_from(["switchstab", "simulate", "--eta=-1"]).unwrap();
        let err = RunConfig::from_cli(cli).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let cli = Cli::try_parse_from(["switchstab", "analyze", "--k-list", "1,0"]).unwrap();
        assert!(RunConfig::from_cli(cli).is_err());
        assert!(Cli::try_parse_from(["switchstab", "example", "3"]).is_err());
    }

    #[test]
    fn exit_code_classes() {
        assert_eq!(
            CliError::from(Error::Singular { pivot: 0.0 }).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(Error::UnstableAverage { abscissa: 1.0 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(Error::InvalidSignal("x".into())).exit_code(),
            1
        );
    }
}
