//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when the search finds no feasible
//! configuration, 2 on usage, configuration or runtime errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use log::{info, LevelFilter};
use thiserror::Error;

use crate::constellation::{all_elements, ConstellationConfig, ConstellationError};
use crate::hexgrid::HexGridError;
use crate::io::{
    load_scenario, parse_scenario, write_outputs, ConfigError, OutputError, OutputSet,
    ScenarioConfig,
};
use crate::optimizer::{optimize, reference_period, OptimizeError, Scenario};
use crate::orbit::{ground_track, OrbitError};
use crate::sensor::SensorError;

/// Scenario used by `reproduce`.
pub const REPRODUCE_SCENARIO: &str = include_str!("../scenarios/reference.toml");

/// Ground-track sampling step in seconds.
const TRACK_STEP_S: f64 = 60.0;

#[derive(Debug, Parser)]
#[command(
    name = "walkeropt",
    version,
    about = "Walker constellation design for regional average coverage"
)]
pub struct Cli {
    /// More log output on stderr (-v info, -vv debug, -vvv trace)
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground tracks of the initial constellation over the evaluation window
    Propagate(RunArgs),
    /// Sensor footprints of the initial constellation at the sampled epochs
    Footprint(RunArgs),
    /// Average coverage of the initial constellation
    Coverage(RunArgs),
    /// Simulated-annealing search for the smallest feasible constellation
    Optimize(RunArgs),
    /// Run the bundled reference scenario
    Reproduce(Overrides),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario file (TOML)
    pub scenario: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// RNG seed for epochs and annealing decisions
    #[arg(long)]
    pub seed: Option<u64>,
    /// Hexagon circumradius in degrees
    #[arg(long)]
    pub cell_radius_deg: Option<f64>,
    /// Number of sampled evaluation epochs
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Evaluation window length in nodal periods
    #[arg(long)]
    pub periods: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads for coverage evaluation (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("{0}")]
    Runtime(String),
}

impl From<ConstellationError> for CliError {
    fn from(e: ConstellationError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<OrbitError> for CliError {
    fn from(e: OrbitError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<SensorError> for CliError {
    fn from(e: SensorError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<HexGridError> for CliError {
    fn from(e: HexGridError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Optimize(OptimizeError::NoFeasibleSolution) => 1,
            _ => 2,
        }
    }
}

impl Overrides {
    fn apply(&self, cfg: &mut ScenarioConfig) -> Result<(), ConfigError> {
        if let Some(s) = self.seed {
            cfg.annealing.seed = s;
        }
        if let Some(r) = self.cell_radius_deg {
            cfg.grid.cell_radius_deg = r;
        }
        if let Some(n) = self.epochs {
            cfg.annealing.n_epochs = n;
        }
        if let Some(n) = self.periods {
            cfg.annealing.n_periods = n;
        }
        if let Some(d) = &self.out_dir {
            cfg.output_dir = d.to_string_lossy().into_owned();
        }
        if self.threads == Some(0) {
            return Err(ConfigError::Validation {
                key: "--threads".into(),
                message: "must be at least 1".into(),
            });
        }
        cfg.validate()
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        2 => LevelFilter::Debug,
        _ => LevelFilter::Trace,
    };
    // a second call (tests, embedding) keeps the first logger
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .try_init();
}

fn build_scenario(cfg: &ScenarioConfig) -> Result<Scenario, CliError> {
    let grid = cfg.grid()?;
    info!(
        "grid: {} cells of radius {}°",
        grid.len(),
        cfg.grid.cell_radius_deg
    );
    let a = &cfg.annealing;
    Ok(Scenario::with_sampled_epochs(
        cfg.earth_model(),
        cfg.sensor_model(),
        grid,
        &cfg.reference_constellation(),
        a.n_periods,
        a.n_epochs,
        a.seed,
    )?)
}

fn require_satellites(config: &ConstellationConfig) -> Result<(), CliError> {
    if config.total_sats() == 0 {
        return Err(ConfigError::Validation {
            key: "initial".into(),
            message: "needs at least one shell".into(),
        }
        .into());
    }
    Ok(())
}

fn propagate_cmd(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let initial = cfg.initial_constellation();
    require_satellites(&initial)?;
    let earth = cfg.earth_model();
    let span = cfg.annealing.n_periods as f64 * reference_period(&initial, &earth)?;
    let n_samples = ((span / TRACK_STEP_S).ceil() as usize).max(1) + 1;
    let tracks = all_elements(&initial, &earth)?
        .iter()
        .enumerate()
        .map(|(k, (_, el))| Ok((k, ground_track(el, &earth, 0.0, span, n_samples)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let dir = PathBuf::from(&cfg.output_dir);
    write_outputs(
        &dir,
        &OutputSet {
            ground_tracks: Some(&tracks),
            ..Default::default()
        },
    )?;
    println!(
        "{} ground tracks, {} samples each, over {:.1} s",
        tracks.len(),
        n_samples,
        span
    );
    Ok(())
}

fn footprint_cmd(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let initial = cfg.initial_constellation();
    let scenario = build_scenario(cfg)?;
    let elements = all_elements(&initial, &scenario.earth)?;
    let mut footprints = Vec::new();
    for &t in &scenario.epochs {
        footprints.extend(scenario.footprints_at(&elements, t)?);
    }
    let dir = PathBuf::from(&cfg.output_dir);
    write_outputs(
        &dir,
        &OutputSet {
            footprints: Some(&footprints),
            grid: Some(&scenario.grid),
            ..Default::default()
        },
    )?;
    println!(
        "{} footprints at {} epochs",
        footprints.len(),
        scenario.epochs.len()
    );
    Ok(())
}

fn coverage_cmd(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let initial = cfg.initial_constellation();
    let scenario = build_scenario(cfg)?;
    let report = scenario.coverage_report(&initial)?;
    let dir = PathBuf::from(&cfg.output_dir);
    write_outputs(
        &dir,
        &OutputSet {
            coverage: Some(&report),
            grid: Some(&scenario.grid),
            ..Default::default()
        },
    )?;
    println!(
        "{}: average coverage {:.6} over {} epochs, {} cells",
        initial.describe(),
        report.average,
        report.instantaneous.len(),
        report.total_cells
    );
    Ok(())
}

fn optimize_cmd(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let initial = cfg.initial_constellation();
    require_satellites(&initial)?;
    let scenario = build_scenario(cfg)?;
    let params = cfg.annealing_params();
    let result = optimize(&initial, &params, &scenario)?;
    let dir = PathBuf::from(&cfg.output_dir);
    let Some(best) = &result.best else {
        write_outputs(
            &dir,
            &OutputSet {
                history: Some(&result.history),
                ..Default::default()
            },
        )?;
        println!(
            "no configuration reached coverage {} in {} iterations",
            params.coverage_target, result.iterations
        );
        return Err(OptimizeError::NoFeasibleSolution.into());
    };

    let elements = all_elements(&best.config, &scenario.earth)?;
    let report = scenario.coverage_report(&best.config)?;
    let span = reference_period(&best.config, &scenario.earth)?;
    let n_samples = (span / TRACK_STEP_S).ceil() as usize + 1;
    let tracks = elements
        .iter()
        .enumerate()
        .map(|(k, (_, el))| Ok((k, ground_track(el, &scenario.earth, 0.0, span, n_samples)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let footprints = match scenario.epochs.first() {
        Some(&t) => scenario.footprints_at(&elements, t)?,
        None => Vec::new(),
    };
    write_outputs(
        &dir,
        &OutputSet {
            history: Some(&result.history),
            coverage: Some(&report),
            constellation: Some(&elements),
            ground_tracks: Some(&tracks),
            footprints: Some(&footprints),
            grid: Some(&scenario.grid),
        },
    )?;
    println!(
        "best {}: {} satellites, average coverage {:.6}, found at iteration {} of {}",
        best.config.describe(),
        best.config.total_sats(),
        best.coverage,
        best.iteration,
        result.iterations
    );
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (mut cfg, overrides, command) = match cli.command {
        Command::Reproduce(o) => (parse_scenario(REPRODUCE_SCENARIO)?, o, "reproduce"),
        Command::Propagate(a) => (load_scenario(&a.scenario)?, a.overrides, "propagate"),
        Command::Footprint(a) => (load_scenario(&a.scenario)?, a.overrides, "footprint"),
        Command::Coverage(a) => (load_scenario(&a.scenario)?, a.overrides, "coverage"),
        Command::Optimize(a) => (load_scenario(&a.scenario)?, a.overrides, "optimize"),
    };
    overrides.apply(&mut cfg)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = overrides.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Runtime(e.to_string()))?;
    info!("{command}: output directory {}", cfg.output_dir);
    pool.install(|| match command {
        "propagate" => propagate_cmd(&cfg),
        "footprint" => footprint_cmd(&cfg),
        "coverage" => coverage_cmd(&cfg),
        _ => optimize_cmd(&cfg),
    })
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    init_logging(cli.verbose);
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Optimize(OptimizeError::NoFeasibleSolution)) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
