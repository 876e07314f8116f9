//! Scenario files (TOML) and result writers (CSV, GeoJSON).
//!
//! Angles are degrees in every file and radians in memory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constellation::{elements_csv, ConstellationConfig, SatelliteId, WalkerShell};
use crate::hexgrid::{geometry::Point, tessellate, CoverageReport, HexGrid, TargetRegion};
use crate::optimizer::{history_csv, AnnealingParams, HistoryEntry};
use crate::orbit::{EarthModel, GroundTrack, OrbitalElements};
use crate::sensor::{FootprintPolygon, SensorKind, SensorModel};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
}

#[derive(Debug, Error)]
#[error("cannot write {path}: {source}")]
pub struct OutputError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        key: key.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EarthSection {
    pub re_km: f64,
    pub e2: f64,
    pub omega_e_rad_s: f64,
    pub mu_km3_s2: f64,
    pub j2: f64,
    pub sg0_deg: f64,
}

impl Default for EarthSection {
    fn default() -> Self {
        let e = EarthModel::WGS84;
        Self {
            re_km: e.re,
            e2: e.e2,
            omega_e_rad_s: e.omega_e,
            mu_km3_s2: e.mu,
            j2: e.j2,
            sg0_deg: e.sg0.to_degrees(),
        }
    }
}

/// Shell defaults shared by every initial shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitSection {
    pub a_km: f64,
    pub e: f64,
}

impl Default for OrbitSection {
    fn default() -> Self {
        Self {
            a_km: 8576.0,
            e: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorKindName {
    Frame,
    Conic,
    Pushbroom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorSection {
    pub kind: SensorKindName,
    pub half_fov_deg: f64,
    /// Only used by conic sensors.
    pub boundary_samples: usize,
}

impl Default for SensorSection {
    fn default() -> Self {
        Self {
            kind: SensorKindName::Frame,
            half_fov_deg: 30.0,
            boundary_samples: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LonLat {
    pub lon: f64,
    pub lat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub boundary: Vec<LonLat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub cell_radius_deg: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            cell_radius_deg: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnealingSection {
    pub t0: f64,
    pub t_min: f64,
    pub alpha: f64,
    pub coverage_target: f64,
    pub n_periods: usize,
    pub n_epochs: usize,
    pub incl_step0_deg: f64,
    pub seed: u64,
    pub candidates: usize,
    pub acceptance_scale: f64,
    pub max_total_sats: usize,
}

impl Default for AnnealingSection {
    fn default() -> Self {
        let p = AnnealingParams::default();
        Self {
            t0: p.t0,
            t_min: p.t_min,
            alpha: p.alpha,
            coverage_target: p.coverage_target,
            n_periods: p.n_periods,
            n_epochs: p.n_epochs,
            incl_step0_deg: p.incl_step0.to_degrees(),
            seed: p.rng_seed,
            candidates: p.candidates,
            acceptance_scale: p.acceptance_scale,
            max_total_sats: p.max_total_sats,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellSection {
    pub n_sats: usize,
    pub n_planes: usize,
    pub phase_factor: usize,
    pub inclination_deg: f64,
    #[serde(default)]
    pub raan0_deg: f64,
    #[serde(default)]
    pub argp_deg: f64,
    /// Overrides `orbit.a_km` for this shell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
}

fn default_initial() -> Vec<ShellSection> {
    vec![ShellSection {
        n_sats: 6,
        n_planes: 3,
        phase_factor: 1,
        inclination_deg: 40.0,
        raan0_deg: 0.0,
        argp_deg: 0.0,
        a_km: None,
        e: None,
    }]
}

fn default_output_dir() -> String {
    "out".into()
}

/// A complete experiment definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub earth: EarthSection,
    #[serde(default)]
    pub orbit: OrbitSection,
    #[serde(default)]
    pub sensor: SensorSection,
    pub region: RegionSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub annealing: AnnealingSection,
    #[serde(default = "default_initial")]
    pub initial: Vec<ShellSection>,
}

impl ScenarioConfig {
    pub fn earth_model(&self) -> EarthModel {
        let e = &self.earth;
        EarthModel {
            re: e.re_km,
            e2: e.e2,
            omega_e: e.omega_e_rad_s,
            mu: e.mu_km3_s2,
            j2: e.j2,
            sg0: e.sg0_deg.to_radians(),
        }
    }

    pub fn sensor_model(&self) -> SensorModel {
        let kind = match self.sensor.kind {
            SensorKindName::Frame => SensorKind::Frame,
            SensorKindName::Pushbroom => SensorKind::PushBroom,
            SensorKindName::Conic => SensorKind::Conic {
                boundary_samples: self.sensor.boundary_samples,
            },
        };
        SensorModel {
            half_fov: self.sensor.half_fov_deg.to_radians(),
            kind,
        }
    }

    pub fn region_boundary(&self) -> Vec<Point> {
        self.region
            .boundary
            .iter()
            .map(|p| (p.lon, p.lat))
            .collect()
    }

    pub fn target_region(&self) -> Result<TargetRegion, ConfigError> {
        TargetRegion::new(self.region_boundary())
            .map_err(|e| invalid("region.boundary", e.to_string()))
    }

    pub fn grid(&self) -> Result<HexGrid, ConfigError> {
        tessellate(&self.target_region()?, self.grid.cell_radius_deg)
            .map_err(|e| invalid("grid.cell_radius_deg", e.to_string()))
    }

    pub fn annealing_params(&self) -> AnnealingParams {
        let a = &self.annealing;
        AnnealingParams {
            t0: a.t0,
            t_min: a.t_min,
            alpha: a.alpha,
            coverage_target: a.coverage_target,
            n_periods: a.n_periods,
            n_epochs: a.n_epochs,
            incl_step0: a.incl_step0_deg.to_radians(),
            rng_seed: a.seed,
            candidates: a.candidates,
            acceptance_scale: a.acceptance_scale,
            max_total_sats: a.max_total_sats,
        }
    }

    pub fn shell(&self, s: &ShellSection) -> WalkerShell {
        WalkerShell {
            n_sats: s.n_sats,
            n_planes: s.n_planes,
            phase_factor: s.phase_factor,
            inclination: s.inclination_deg.to_radians(),
            a: s.a_km.unwrap_or(self.orbit.a_km),
            e: s.e.unwrap_or(self.orbit.e),
            argp: s.argp_deg.to_radians(),
            raan0: s.raan0_deg.to_radians(),
            epoch: 0.0,
        }
    }

    /// Initial constellation; may be empty.
    pub fn initial_constellation(&self) -> ConstellationConfig {
        ConstellationConfig {
            shells: self.initial.iter().map(|s| self.shell(s)).collect(),
        }
    }

    /// Constellation whose first shell sets the nodal period used for epoch
    /// sampling: the initial constellation, or a single equatorial satellite
    /// on the default orbit when that is empty.
    pub fn reference_constellation(&self) -> ConstellationConfig {
        let initial = self.initial_constellation();
        if !initial.shells.is_empty() {
            return initial;
        }
        let shell = WalkerShell {
            e: self.orbit.e,
            ..WalkerShell::circular(1, 1, 0, 0.0, self.orbit.a_km)
        };
        ConstellationConfig {
            shells: vec![shell],
        }
    }

    /// Checks every field against the invariants of the type it feeds,
    /// reporting the first violation with its key path.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let earth = self.earth_model();
        if let Err(e) = earth.validate() {
            let key = match &e {
                crate::orbit::OrbitError::InvalidEarth { field, .. } => match *field {
                    "re" => "earth.re_km",
                    "omega_e" => "earth.omega_e_rad_s",
                    "mu" => "earth.mu_km3_s2",
                    "sg0" => "earth.sg0_deg",
                    "j2" => "earth.j2",
                    _ => "earth.e2",
                },
                _ => "earth",
            };
            return Err(invalid(key, e.to_string()));
        }
        if !(self.orbit.e.is_finite() && (0.0..1.0).contains(&self.orbit.e)) {
            return Err(invalid(
                "orbit.e",
                format!("eccentricity must be in [0, 1), got {}", self.orbit.e),
            ));
        }
        if !(self.orbit.a_km * (1.0 - self.orbit.e) > earth.re) {
            return Err(invalid(
                "orbit.a_km",
                format!("perigee must be above Re = {} km", earth.re),
            ));
        }
        self.sensor_model().validate().map_err(|e| {
            let key = if self.sensor.half_fov_deg > 0.0 && self.sensor.half_fov_deg < 90.0 {
                "sensor.boundary_samples"
            } else {
                "sensor.half_fov_deg"
            };
            invalid(key, e.to_string())
        })?;
        for (k, p) in self.region.boundary.iter().enumerate() {
            if !(p.lon.is_finite() && (-180.0..=180.0).contains(&p.lon)) {
                return Err(invalid(
                    format!("region.boundary[{k}].lon"),
                    format!("{} outside [-180, 180]", p.lon),
                ));
            }
            if !(p.lat.is_finite() && (-90.0..=90.0).contains(&p.lat)) {
                return Err(invalid(
                    format!("region.boundary[{k}].lat"),
                    format!("{} outside [-90, 90]", p.lat),
                ));
            }
        }
        self.target_region()?;
        if !(self.grid.cell_radius_deg.is_finite() && self.grid.cell_radius_deg > 0.0) {
            return Err(invalid(
                "grid.cell_radius_deg",
                format!("must be > 0, got {}", self.grid.cell_radius_deg),
            ));
        }
        self.annealing_params()
            .validate()
            .map_err(|e| invalid("annealing", e.to_string()))?;
        for (k, s) in self.initial.iter().enumerate() {
            let shell = self.shell(s);
            shell
                .validate()
                .map_err(|e| invalid(format!("initial[{k}]"), e.to_string()))?;
            if !(shell.e >= 0.0 && shell.e < 1.0) {
                return Err(invalid(
                    format!("initial[{k}].e"),
                    "eccentricity must be in [0, 1)",
                ));
            }
            if !(0.0..=180.0).contains(&s.inclination_deg) {
                return Err(invalid(
                    format!("initial[{k}].inclination_deg"),
                    "must be in [0, 180]",
                ));
            }
            if !(shell.a * (1.0 - shell.e) > earth.re) {
                return Err(invalid(
                    format!("initial[{k}].a_km"),
                    "perigee must be above the surface",
                ));
            }
        }
        Ok(())
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

/// Full TOML rendering of a scenario, defaults included.
pub fn dump_scenario(cfg: &ScenarioConfig) -> String {
    toml::to_string(cfg).expect("scenario config is always representable as TOML")
}

/// CSV `sat_id,t_s,lon_deg,lat_deg` with one block per satellite.
pub fn ground_tracks_csv(tracks: &[(usize, GroundTrack)]) -> String {
    let mut out = String::from("sat_id,");
    let mut header = true;
    for (id, track) in tracks {
        for (k, line) in track.to_csv().lines().enumerate() {
            if k == 0 {
                if header {
                    out.push_str(line);
                    out.push('\n');
                    header = false;
                }
                continue;
            }
            let _ = writeln!(out, "{id},{line}");
        }
    }
    if header {
        out.push_str("t_s,lon_deg,lat_deg\n");
    }
    out
}

fn ring_json(ring: &[Point]) -> String {
    let mut s = String::from("[");
    for (k, &(x, y)) in ring.iter().chain(ring.first()).enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "[{x:.7},{y:.7}]");
    }
    s.push(']');
    s
}

fn geometry_json(rings: &[Vec<Point>]) -> String {
    match rings {
        [ring] if ring.len() == 2 => format!(
            "{{\"type\":\"LineString\",\"coordinates\":[[{:.7},{:.7}],[{:.7},{:.7}]]}}",
            ring[0].0, ring[0].1, ring[1].0, ring[1].1
        ),
        [ring] => format!(
            "{{\"type\":\"Polygon\",\"coordinates\":[{}]}}",
            ring_json(ring)
        ),
        _ => {
            let polys: Vec<String> = rings
                .iter()
                .map(|r| format!("[{}]", ring_json(r)))
                .collect();
            format!(
                "{{\"type\":\"MultiPolygon\",\"coordinates\":[{}]}}",
                polys.join(",")
            )
        }
    }
}

fn feature_collection(features: &[String]) -> String {
    let mut s = String::from("{\"type\":\"FeatureCollection\",\"features\":[\n");
    s.push_str(&features.join(",\n"));
    if !features.is_empty() {
        s.push('\n');
    }
    s.push_str("]}\n");
    s
}

/// One feature per footprint with `sat_id` and `t_s` properties. Footprints
/// crossing the antimeridian become MultiPolygons of their split parts.
pub fn footprints_geojson(footprints: &[FootprintPolygon]) -> String {
    let features: Vec<String> = footprints
        .iter()
        .map(|fp| {
            format!(
                "{{\"type\":\"Feature\",\"properties\":{{\"sat_id\":{},\"t_s\":{:.6}}},\"geometry\":{}}}",
                fp.satellite_id,
                fp.epoch,
                geometry_json(&fp.planar_rings_deg())
            )
        })
        .collect();
    feature_collection(&features)
}

pub fn grid_geojson(grid: &HexGrid) -> String {
    let features: Vec<String> = grid
        .cells()
        .iter()
        .map(|c| {
            format!(
                "{{\"type\":\"Feature\",\"properties\":{{\"id\":{}}},\"geometry\":{}}}",
                c.id,
                geometry_json(&[c.vertices.to_vec()])
            )
        })
        .collect();
    feature_collection(&features)
}

/// Results to write; absent entries produce no file.
#[derive(Debug, Default, Clone, Copy)]
pub struct OutputSet<'a> {
    pub history: Option<&'a [HistoryEntry]>,
    pub coverage: Option<&'a CoverageReport>,
    pub constellation: Option<&'a [(SatelliteId, OrbitalElements)]>,
    pub ground_tracks: Option<&'a [(usize, GroundTrack)]>,
    pub footprints: Option<&'a [FootprintPolygon]>,
    pub grid: Option<&'a HexGrid>,
}

/// Writes `history.csv`, `coverage_series.csv`, `best_constellation.csv`,
/// `ground_tracks.csv`, `footprints.geojson` and `grid.geojson` into `dir`
/// for each result present. Returns the paths written.
pub fn write_outputs(dir: &Path, out: &OutputSet<'_>) -> Result<Vec<PathBuf>, OutputError> {
    fs::create_dir_all(dir).map_err(|source| OutputError {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files: Vec<(&str, String)> = Vec::new();
    if let Some(h) = out.history {
        files.push(("history.csv", history_csv(h)));
    }
    if let Some(c) = out.coverage {
        files.push(("coverage_series.csv", c.to_csv()));
    }
    if let Some(e) = out.constellation {
        files.push(("best_constellation.csv", elements_csv(e)));
    }
    if let Some(g) = out.ground_tracks {
        files.push(("ground_tracks.csv", ground_tracks_csv(g)));
    }
    if let Some(f) = out.footprints {
        files.push(("footprints.geojson", footprints_geojson(f)));
    }
    if let Some(g) = out.grid {
        files.push(("grid.geojson", grid_geojson(g)));
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|source| OutputError {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}
