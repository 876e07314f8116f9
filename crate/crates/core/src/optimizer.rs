//! Simulated-annealing search for the smallest Walker configuration that
//! meets an average-coverage target.
//!
//! Each iteration evaluates the current configuration; a feasible one is
//! recorded and may replace the best, then inclinations are perturbed
//! (range shrinking with temperature) and the configuration is shrunk if it
//! was feasible or grown if it was not. Temperature follows `t0 · αᵏ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::constellation::{
    all_elements, ConstellationConfig, ConstellationError, SatelliteId, WalkerShell,
};
use crate::hexgrid::{average_coverage, CoverageReport, HexGrid, HexGridError};
use crate::orbit::{nodal_period, EarthModel, OrbitalElements};
use crate::sensor::{footprint, FootprintPolygon, SensorError, SensorModel};

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("invalid annealing parameter {0}")]
    InvalidParams(String),
    #[error("invalid acceptance arguments: iteration {n}, temperature {t}")]
    InvalidAcceptance { n: usize, t: f64 },
    #[error("no feasible configuration found")]
    NoFeasibleSolution,
    #[error(transparent)]
    Constellation(#[from] ConstellationError),
    #[error(transparent)]
    Coverage(#[from] HexGridError),
    #[error(transparent)]
    Sensor(#[from] SensorError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealingParams {
    pub t0: f64,
    pub t_min: f64,
    /// Geometric cooling factor.
    pub alpha: f64,
    pub coverage_target: f64,
    pub n_periods: usize,
    pub n_epochs: usize,
    /// Inclination perturbation half-range at `t0`, rad.
    pub incl_step0: f64,
    pub rng_seed: u64,
    /// Inclination candidates drawn per shell per iteration.
    pub candidates: usize,
    /// Numerator of the acceptance exponent `-scale / (n · T)`.
    pub acceptance_scale: f64,
    /// Growth never takes the constellation above this many satellites.
    pub max_total_sats: usize,
}

impl Default for AnnealingParams {
    fn default() -> Self {
        Self {
            t0: 1.0,
            t_min: 0.01,
            alpha: 0.98,
            coverage_target: 0.70,
            n_periods: 30,
            n_epochs: 50,
            incl_step0: 5f64.to_radians(),
            rng_seed: 42,
            candidates: 3,
            acceptance_scale: 100.0,
            max_total_sats: 1000,
        }
    }
}

impl AnnealingParams {
    pub fn validate(&self) -> Result<(), OptimizeError> {
        let bad = |s: String| Err(OptimizeError::InvalidParams(s));
        if !(self.t_min > 0.0 && self.t_min < self.t0 && self.t0.is_finite()) {
            return bad(format!(
                "temperatures: need 0 < t_min < t0, got t_min={} t0={}",
                self.t_min, self.t0
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must be in (0, 1), got {}", self.alpha));
        }
        if !(self.coverage_target >= 0.0 && self.coverage_target <= 1.0) {
            return bad(format!(
                "coverage_target must be in [0, 1], got {}",
                self.coverage_target
            ));
        }
        if self.n_periods == 0 || self.n_epochs == 0 {
            return bad("n_periods and n_epochs must be positive".into());
        }
        if !(self.incl_step0 >= 0.0 && self.incl_step0.is_finite()) {
            return bad(format!("incl_step0 must be >= 0, got {}", self.incl_step0));
        }
        if self.candidates == 0 {
            return bad("candidates must be >= 1".into());
        }
        if !(self.acceptance_scale >= 0.0 && self.acceptance_scale.is_finite()) {
            return bad(format!(
                "acceptance_scale must be >= 0, got {}",
                self.acceptance_scale
            ));
        }
        if self.max_total_sats == 0 {
            return bad("max_total_sats must be >= 1".into());
        }
        Ok(())
    }

    pub fn schedule(&self) -> CoolingSchedule {
        CoolingSchedule {
            t0: self.t0,
            t_min: self.t_min,
            alpha: self.alpha,
        }
    }
}

/// Geometric cooling. Iteration `k` (0-based) runs at `t0 · αᵏ`; the run ends
/// after the first iteration whose temperature is at or below `t_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingSchedule {
    pub t0: f64,
    pub t_min: f64,
    pub alpha: f64,
}

impl CoolingSchedule {
    pub fn temperature(&self, k: usize) -> f64 {
        self.t0 * self.alpha.powi(k as i32)
    }

    pub fn is_last(&self, k: usize) -> bool {
        self.temperature(k) <= self.t_min
    }

    /// Number of iterations the annealing loop performs.
    pub fn iterations(&self) -> usize {
        let mut k = 0;
        while !self.is_last(k) {
            k += 1;
        }
        k + 1
    }
}

/// `exp(-100 / (n · t))`.
pub fn acceptance_probability(n: usize, t: f64) -> Result<f64, OptimizeError> {
    acceptance_probability_with_scale(n, t, 100.0)
}

pub fn acceptance_probability_with_scale(
    n: usize,
    t: f64,
    scale: f64,
) -> Result<f64, OptimizeError> {
    if n == 0 || !(t > 0.0) {
        return Err(OptimizeError::InvalidAcceptance { n, t });
    }
    Ok((-scale / (n as f64 * t)).exp().clamp(0.0, 1.0))
}

/// Everything coverage evaluation needs besides the constellation.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub earth: EarthModel,
    pub sensor: SensorModel,
    pub grid: HexGrid,
    pub epochs: Vec<f64>,
}

/// Draws `n` epochs uniformly over `[0, span]`, sorted ascending.
pub fn sample_epochs<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<f64> {
    let mut epochs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * span).collect();
    epochs.sort_by(f64::total_cmp);
    epochs
}

/// Nodal period of the first satellite of the first shell.
pub fn reference_period(
    config: &ConstellationConfig,
    earth: &EarthModel,
) -> Result<f64, OptimizeError> {
    let shell = config
        .shells
        .first()
        .ok_or_else(|| OptimizeError::InvalidParams("constellation has no shells".into()))?;
    let el = OrbitalElements::new(
        shell.a,
        shell.e,
        shell.inclination,
        0.0,
        shell.argp,
        0.0,
        0.0,
        earth,
    )
    .map_err(ConstellationError::from)?;
    Ok(nodal_period(&el, earth))
}

impl Scenario {
    /// Scenario whose epochs are `n_epochs` uniform draws over `n_periods`
    /// nodal periods of `reference`, from a stream derived from `seed`.
    pub fn with_sampled_epochs(
        earth: EarthModel,
        sensor: SensorModel,
        grid: HexGrid,
        reference: &ConstellationConfig,
        n_periods: usize,
        n_epochs: usize,
        seed: u64,
    ) -> Result<Self, OptimizeError> {
        let span = n_periods as f64 * reference_period(reference, &earth)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // separate stream from the annealing decisions
        rng.set_stream(1);
        let epochs = sample_epochs(&mut rng, n_epochs, span);
        Ok(Self {
            earth,
            sensor,
            grid,
            epochs,
        })
    }

    pub fn footprints_at(
        &self,
        elements: &[(SatelliteId, OrbitalElements)],
        t: f64,
    ) -> Result<Vec<FootprintPolygon>, SensorError> {
        elements
            .iter()
            .enumerate()
            .map(|(k, (_, el))| footprint(el, &self.earth, &self.sensor, t, k))
            .collect()
    }

    pub fn coverage_report(
        &self,
        config: &ConstellationConfig,
    ) -> Result<CoverageReport, OptimizeError> {
        let elements = all_elements(config, &self.earth)?;
        Ok(average_coverage(
            &self.grid,
            |t| self.footprints_at(&elements, t),
            &self.epochs,
        )?)
    }

    /// Average coverage of `config` over the scenario epochs.
    pub fn evaluate(&self, config: &ConstellationConfig) -> Result<f64, OptimizeError> {
        if config.total_sats() == 0 {
            return Ok(0.0);
        }
        Ok(self.coverage_report(config)?.average)
    }
}

/// Result of one inclination perturbation step.
#[derive(Debug, Clone, PartialEq)]
pub struct InclinationStep {
    pub config: ConstellationConfig,
    /// Coverage of the returned configuration, when any candidate was evaluated.
    pub coverage: Option<f64>,
    /// Per shell: every (inclination, coverage) candidate evaluated.
    pub batches: Vec<Vec<(f64, f64)>>,
}

/// For each shell in turn, draws `candidates` inclinations uniformly within
/// `±incl_step0 · t / t0` of the current one (clamped to (0°, 90°]) and keeps
/// the one giving the highest average coverage.
pub fn perturb_inclination<R: Rng>(
    config: &ConstellationConfig,
    t: f64,
    params: &AnnealingParams,
    scenario: &Scenario,
    rng: &mut R,
) -> Result<InclinationStep, OptimizeError> {
    if !(t > 0.0) {
        return Err(OptimizeError::InvalidParams(format!(
            "temperature must be > 0, got {t}"
        )));
    }
    let half_range = params.incl_step0 * t / params.t0;
    let mut out = config.clone();
    let mut coverage = None;
    let mut batches = Vec::with_capacity(config.shells.len());
    for j in 0..out.shells.len() {
        let center = out.shells[j].inclination;
        let mut batch = Vec::with_capacity(params.candidates);
        let mut best: Option<(f64, f64)> = None;
        for _ in 0..params.candidates {
            let offset = if half_range > 0.0 {
                rng.random_range(-half_range..=half_range)
            } else {
                0.0
            };
            let incl = (center + offset).clamp(1e-9, std::f64::consts::FRAC_PI_2);
            let mut trial = out.clone();
            trial.shells[j].inclination = incl;
            let cov = scenario.evaluate(&trial)?;
            batch.push((incl, cov));
            if best.is_none_or(|(_, c)| cov > c) {
                best = Some((incl, cov));
            }
        }
        if let Some((incl, cov)) = best {
            out.shells[j].inclination = incl;
            coverage = Some(cov);
        }
        batches.push(batch);
    }
    Ok(InclinationStep {
        config: out,
        coverage,
        batches,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResizeAxis {
    Planes,
    SatsPerPlane,
}

/// Shell with `P` or `S` changed by `delta`; `N = P·S` and `F` re-clamped to
/// `[0, P-1]`. `None` when the shell would vanish.
pub fn resize_shell(shell: &WalkerShell, axis: ResizeAxis, delta: i64) -> Option<WalkerShell> {
    let mut p = shell.n_planes as i64;
    let mut s = shell.sats_per_plane() as i64;
    match axis {
        ResizeAxis::Planes => p += delta,
        ResizeAxis::SatsPerPlane => s += delta,
    }
    if p <= 0 || s <= 0 {
        return None;
    }
    let (p, s) = (p as usize, s as usize);
    Some(WalkerShell {
        n_sats: p * s,
        n_planes: p,
        phase_factor: shell.phase_factor.min(p - 1),
        ..*shell
    })
}

fn resize<R: Rng>(
    config: &ConstellationConfig,
    t: f64,
    rng: &mut R,
    delta: i64,
    cap: usize,
) -> ConstellationConfig {
    let p_change = (0.5 * t).clamp(0.0, 1.0);
    let mut shells = Vec::with_capacity(config.shells.len());
    let mut total = config.total_sats();
    for shell in &config.shells {
        if rng.random::<f64>() >= p_change {
            shells.push(*shell);
            continue;
        }
        let axis = if rng.random_bool(0.5) {
            ResizeAxis::Planes
        } else {
            ResizeAxis::SatsPerPlane
        };
        match resize_shell(shell, axis, delta) {
            Some(next) => {
                let new_total = total - shell.n_sats + next.n_sats;
                if new_total > cap {
                    shells.push(*shell);
                } else {
                    total = new_total;
                    shells.push(next);
                }
            }
            None => total -= shell.n_sats,
        }
    }
    ConstellationConfig { shells }
}

/// With probability `0.5·t` per shell, removes one plane or one satellite
/// per plane (fair coin). A single-satellite configuration is returned
/// unchanged, as is any draw that would empty the constellation.
pub fn shrink<R: Rng>(config: &ConstellationConfig, t: f64, rng: &mut R) -> ConstellationConfig {
    if config.total_sats() <= 1 {
        return config.clone();
    }
    let next = resize(config, t, rng, -1, usize::MAX);
    if next.total_sats() == 0 {
        config.clone()
    } else {
        next
    }
}

/// With probability `0.5·t` per shell, adds one plane or one satellite per
/// plane (fair coin), never exceeding `cap` satellites in total.
pub fn grow<R: Rng>(
    config: &ConstellationConfig,
    t: f64,
    rng: &mut R,
    cap: usize,
) -> ConstellationConfig {
    resize(config, t, rng, 1, cap)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    /// 1-based iteration number.
    pub iteration: usize,
    pub temperature: f64,
    pub total_sats: usize,
    pub avg_coverage: f64,
    pub feasible: bool,
    pub accepted_best: bool,
    /// Satellite count of the best configuration after this iteration.
    pub best_total: Option<usize>,
}

/// CSV `iter,temperature,total_sats,avg_coverage,feasible,accepted_best`.
pub fn history_csv(history: &[HistoryEntry]) -> String {
    let mut out = String::from("iter,temperature,total_sats,avg_coverage,feasible,accepted_best\n");
    for h in history {
        out.push_str(&format!(
            "{},{:.12},{},{:.12},{},{}\n",
            h.iteration, h.temperature, h.total_sats, h.avg_coverage, h.feasible, h.accepted_best
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub config: ConstellationConfig,
    pub coverage: f64,
    /// Iteration at which this solution became the best.
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// `None` when no configuration met the target: the no-feasible-solution outcome.
    pub best: Option<Solution>,
    pub iterations: usize,
    pub history: Vec<HistoryEntry>,
    /// Every distinct feasible configuration evaluated, in discovery order.
    pub feasible: Vec<(ConstellationConfig, f64)>,
    pub epochs: Vec<f64>,
}

impl OptimizationResult {
    pub fn into_best(self) -> Result<Solution, OptimizeError> {
        self.best.ok_or(OptimizeError::NoFeasibleSolution)
    }
}

/// Mutable search state between iterations.
#[derive(Debug, Clone)]
pub struct AnnealingState {
    pub temperature: f64,
    pub iteration: usize,
    pub current: ConstellationConfig,
    pub best: Option<Solution>,
    pub history: Vec<HistoryEntry>,
    rng: ChaCha8Rng,
}

pub fn optimize(
    initial: &ConstellationConfig,
    params: &AnnealingParams,
    scenario: &Scenario,
) -> Result<OptimizationResult, OptimizeError> {
    params.validate()?;
    if initial.total_sats() == 0 {
        return Err(OptimizeError::InvalidParams(
            "initial constellation is empty".into(),
        ));
    }
    for s in &initial.shells {
        s.validate()?;
    }
    let schedule = params.schedule();
    let mut state = AnnealingState {
        temperature: schedule.t0,
        iteration: 0,
        current: initial.clone(),
        best: None,
        history: Vec::new(),
        rng: ChaCha8Rng::seed_from_u64(params.rng_seed),
    };
    let mut feasible: Vec<(ConstellationConfig, f64)> = Vec::new();

    for k in 0.. {
        let t = schedule.temperature(k);
        let n = k + 1;
        state.temperature = t;
        state.iteration = n;

        let coverage = scenario.evaluate(&state.current)?;
        let is_feasible = coverage >= params.coverage_target;
        let mut accepted = false;
        if is_feasible {
            if !feasible.iter().any(|(c, _)| *c == state.current) {
                feasible.push((state.current.clone(), coverage));
            }
            let total = state.current.total_sats();
            accepted = match &state.best {
                None => true,
                Some(b) if total < b.config.total_sats() => true,
                Some(b) if total == b.config.total_sats() => {
                    let p = acceptance_probability_with_scale(n, t, params.acceptance_scale)?;
                    state.rng.random::<f64>() < p
                }
                Some(_) => false,
            };
            if accepted {
                state.best = Some(Solution {
                    config: state.current.clone(),
                    coverage,
                    iteration: n,
                });
            }
        }
        state.history.push(HistoryEntry {
            iteration: n,
            temperature: t,
            total_sats: state.current.total_sats(),
            avg_coverage: coverage,
            feasible: is_feasible,
            accepted_best: accepted,
            best_total: state.best.as_ref().map(|b| b.config.total_sats()),
        });
        log::debug!(
            "iter {n} T={t:.4} {} cov={coverage:.4} feasible={is_feasible} best={:?}",
            state.current.describe(),
            state.best.as_ref().map(|b| b.config.total_sats())
        );

        if schedule.is_last(k) {
            break;
        }
        let step = perturb_inclination(&state.current, t, params, scenario, &mut state.rng)?;
        state.current = if is_feasible {
            shrink(&step.config, t, &mut state.rng)
        } else {
            grow(&step.config, t, &mut state.rng, params.max_total_sats)
        };
    }

    Ok(OptimizationResult {
        best: state.best,
        iterations: state.history.len(),
        history: state.history,
        feasible,
        epochs: scenario.epochs.clone(),
    })
}
