//! Sensor boundary rays, ray/ellipsoid intersection and geodetic conversion,
//! combined into instantaneous ground footprints.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use nalgebra::{Matrix3, Rotation3, Vector3};
use thiserror::Error;

use crate::orbit::{propagate, wrap_pi, EarthModel, OrbitalElements};

#[derive(Debug, Error, PartialEq)]
pub enum SensorError {
    #[error("invalid sensor: {0}")]
    InvalidSensor(String),
    #[error("degenerate sensor frame: velocity is parallel to position")]
    DegenerateFrame,
    #[error("geodetic latitude iteration did not converge for ({x}, {y}, {z}) km")]
    NoConvergence { x: f64, y: f64, z: f64 },
    #[error("every boundary ray missed the ellipsoid")]
    EmptyFootprint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensorKind {
    /// Circular cone sampled at `boundary_samples` azimuths.
    Conic { boundary_samples: usize },
    /// Rectangular frame camera, four corner rays.
    Frame,
    /// Line array, two cross-track edge rays.
    PushBroom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorModel {
    /// Angle between boresight and each boundary ray, rad.
    pub half_fov: f64,
    pub kind: SensorKind,
}

impl SensorModel {
    pub fn new(half_fov: f64, kind: SensorKind) -> Result<Self, SensorError> {
        let s = Self { half_fov, kind };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SensorError> {
        if !(self.half_fov > 0.0 && self.half_fov < FRAC_PI_2) {
            return Err(SensorError::InvalidSensor(format!(
                "half field of view must be in (0, π/2), got {}",
                self.half_fov
            )));
        }
        if let SensorKind::Conic { boundary_samples } = self.kind {
            if boundary_samples < 8 {
                return Err(SensorError::InvalidSensor(format!(
                    "conic sensor needs at least 8 boundary samples, got {boundary_samples}"
                )));
            }
        }
        Ok(())
    }

    /// Azimuths θ of the boundary rays, measured from the sensor Y axis
    /// towards X.
    pub fn boundary_azimuths(&self) -> Vec<f64> {
        match self.kind {
            SensorKind::Frame => (0..4).map(|k| FRAC_PI_4 + k as f64 * FRAC_PI_2).collect(),
            SensorKind::PushBroom => vec![0.0, PI],
            SensorKind::Conic { boundary_samples } => (0..boundary_samples)
                .map(|k| TAU * k as f64 / boundary_samples as f64)
                .collect(),
        }
    }
}

/// Unit ray at off-boresight angle `alpha` and azimuth `theta` in the sensor
/// frame: `(tan α sin θ, tan α cos θ, 1)` normalized.
pub fn boundary_vector(alpha: f64, theta: f64) -> Vector3<f64> {
    let t = alpha.tan();
    Vector3::new(t * theta.sin(), t * theta.cos(), 1.0).normalize()
}

/// Unit observation vectors of the sensor boundary in the sensor frame
/// (Z boresight, X along flight), ordered by azimuth.
pub fn boundary_vectors(s: &SensorModel) -> Vec<Vector3<f64>> {
    s.boundary_azimuths()
        .into_iter()
        .map(|theta| boundary_vector(s.half_fov, theta))
        .collect()
}

/// Earth-fixed position (km) and velocity (km/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteStateEcef {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

impl SatelliteStateEcef {
    /// Nadir-pointing sensor frame as a rotation whose columns are the
    /// sensor X (flight), Y and Z (towards Earth center) axes in ECEF.
    pub fn sensor_frame(&self) -> Result<Matrix3<f64>, SensorError> {
        let z = -self.position.normalize();
        let along = self.velocity - z * self.velocity.dot(&z);
        let norm = along.norm();
        if !(norm > 1e-12 * self.velocity.norm()) || !norm.is_finite() {
            return Err(SensorError::DegenerateFrame);
        }
        let x = along / norm;
        let y = z.cross(&x);
        Ok(Matrix3::from_columns(&[x, y, z]))
    }
}

/// Earth-fixed state from mean elements at time `t` under the secular model.
pub fn ecef_state(el: &OrbitalElements, earth: &EarthModel, t: f64) -> SatelliteStateEcef {
    let p = propagate(el, earth, t);
    let semi_latus = p.a * (1.0 - p.e * p.e);
    let f = p.true_anomaly;
    let r = semi_latus / (1.0 + p.e * f.cos());
    let h = (earth.mu * semi_latus).sqrt();
    let pos_pf = Vector3::new(r * f.cos(), r * f.sin(), 0.0);
    let vel_pf = Vector3::new(-f.sin(), p.e + f.cos(), 0.0) * (earth.mu / h);
    let to_inertial = Rotation3::from_axis_angle(&Vector3::z_axis(), p.raan)
        * Rotation3::from_axis_angle(&Vector3::x_axis(), p.i)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), p.argp);
    let to_fixed = Rotation3::from_axis_angle(&Vector3::z_axis(), -earth.sidereal_angle(t));
    let position = to_fixed * (to_inertial * pos_pf);
    let spin = Vector3::new(0.0, 0.0, earth.omega_e);
    let velocity = to_fixed * (to_inertial * vel_pf) - spin.cross(&position);
    SatelliteStateEcef { position, velocity }
}

pub fn sensor_to_ecef(
    state: &SatelliteStateEcef,
    v_sensor: &Vector3<f64>,
) -> Result<Vector3<f64>, SensorError> {
    Ok((state.sensor_frame()? * v_sensor).normalize())
}

/// Nearest forward intersection of a ray with the ellipsoid, or `None` if
/// the ray misses or the origin is inside.
pub fn intersect_ellipsoid(
    origin: &Vector3<f64>,
    dir: &Vector3<f64>,
    earth: &EarthModel,
) -> Option<Vector3<f64>> {
    let scale = Vector3::new(1.0 / earth.re, 1.0 / earth.re, 1.0 / earth.polar_radius());
    let o = origin.component_mul(&scale);
    let d = dir.component_mul(&scale);
    let a = d.dot(&d);
    let b = 2.0 * o.dot(&d);
    let c = o.dot(&o) - 1.0;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 || c <= 0.0 {
        return None;
    }
    // numerically stable smaller root
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, c / q);
    let t = r1.min(r2);
    if !(t > 0.0) || !t.is_finite() {
        return None;
    }
    Some(origin + dir * t)
}

/// Geodetic longitude, latitude (rad) and ellipsoidal height (km).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodeticPoint {
    pub lon: f64,
    pub lat: f64,
    pub height: f64,
}

pub fn geodetic_to_ecef(p: &GeodeticPoint, earth: &EarthModel) -> Vector3<f64> {
    let (sl, cl) = p.lat.sin_cos();
    let n = earth.re / (1.0 - earth.e2 * sl * sl).sqrt();
    Vector3::new(
        (n + p.height) * cl * p.lon.cos(),
        (n + p.height) * cl * p.lon.sin(),
        (n * (1.0 - earth.e2) + p.height) * sl,
    )
}

/// Cartesian to geodetic by fixed-point iteration on latitude.
///
/// `tan B = (Z + a e² sin B / W) / ρ` with `W = sqrt(1 - e² sin² B)`, started
/// from the geocentric latitude and iterated to 1e-12 rad.
pub fn ecef_to_geodetic(
    p: &Vector3<f64>,
    earth: &EarthModel,
) -> Result<GeodeticPoint, SensorError> {
    let (x, y, z) = (p.x, p.y, p.z);
    let rho = x.hypot(y);
    if !(rho > 0.0 || z != 0.0) || !(rho.is_finite() && z.is_finite()) {
        return Err(SensorError::NoConvergence { x, y, z });
    }
    let lon = if rho == 0.0 { 0.0 } else { y.atan2(x) };
    let mut lat = z.atan2(rho);
    let mut converged = false;
    for _ in 0..100 {
        let s = lat.sin();
        let w = (1.0 - earth.e2 * s * s).sqrt();
        let next = (z + earth.re * earth.e2 * s / w).atan2(rho);
        let step = (next - lat).abs();
        lat = next;
        if step < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SensorError::NoConvergence { x, y, z });
    }
    let (s, c) = lat.sin_cos();
    let n = earth.re / (1.0 - earth.e2 * s * s).sqrt();
    // ρ/cos B loses precision towards the poles; use the Z form there
    let height = if c.abs() > s.abs() {
        rho / c - n
    } else {
        z / s - n * (1.0 - earth.e2)
    };
    Ok(GeodeticPoint {
        lon: wrap_pi(lon),
        lat,
        height,
    })
}

/// Closed ring of on-ellipsoid vertices; the closing edge is implicit.
///
/// Push-broom footprints have two vertices and describe the cross-track line.
#[derive(Debug, Clone, PartialEq)]
pub struct FootprintPolygon {
    pub vertices: Vec<GeodeticPoint>,
    pub epoch: f64,
    pub satellite_id: usize,
}

impl FootprintPolygon {
    /// Vertices in degrees with longitudes unwrapped relative to the first
    /// vertex, so the ring is continuous across the antimeridian.
    pub fn unwrapped_ring_deg(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let lon = v.lon.to_degrees();
            let lon = match out.last() {
                None => lon,
                Some(&(prev, _)) => prev + (lon - prev + 180.0).rem_euclid(360.0) - 180.0,
            };
            out.push((lon, v.lat.to_degrees()));
        }
        out
    }

    /// Planar rings in degrees with longitudes inside [-180, 180]; a
    /// footprint crossing the antimeridian yields two rings.
    pub fn planar_rings_deg(&self) -> Vec<Vec<(f64, f64)>> {
        crate::hexgrid::geometry::split_antimeridian(&self.unwrapped_ring_deg())
    }

    /// Mean of the vertex positions (deg), on the unwrapped ring.
    pub fn vertex_centroid_deg(&self) -> (f64, f64) {
        let ring = self.unwrapped_ring_deg();
        let n = ring.len() as f64;
        let (sx, sy) = ring
            .iter()
            .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        let lon = (sx / n + 180.0).rem_euclid(360.0) - 180.0;
        (lon, sy / n)
    }
}

/// Largest off-boresight angle along azimuth `theta` whose ray still hits
/// the ellipsoid, found by bisection; returns the limb intersection.
fn limb_point(
    state: &SatelliteStateEcef,
    frame: &Matrix3<f64>,
    alpha: f64,
    theta: f64,
    earth: &EarthModel,
) -> Option<Vector3<f64>> {
    let hit = |angle: f64| {
        intersect_ellipsoid(
            &state.position,
            &(frame * boundary_vector(angle, theta)),
            earth,
        )
    };
    let (mut lo, mut hi) = (0.0, alpha);
    let mut best = hit(lo)?;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match hit(mid) {
            Some(p) => {
                best = p;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    Some(best)
}

/// Footprint polygon for an already computed Earth-fixed state.
pub fn footprint_from_state(
    state: &SatelliteStateEcef,
    earth: &EarthModel,
    s: &SensorModel,
    epoch: f64,
    satellite_id: usize,
) -> Result<FootprintPolygon, SensorError> {
    let frame = state.sensor_frame()?;
    let mut vertices = Vec::new();
    let mut any_hit = false;
    for theta in s.boundary_azimuths() {
        let dir = (frame * boundary_vector(s.half_fov, theta)).normalize();
        let ground = match intersect_ellipsoid(&state.position, &dir, earth) {
            Some(p) => {
                any_hit = true;
                Some(p)
            }
            None => limb_point(state, &frame, s.half_fov, theta, earth),
        };
        if let Some(p) = ground {
            let mut g = ecef_to_geodetic(&p, earth)?;
            g.height = 0.0;
            vertices.push(g);
        }
    }
    if !any_hit && vertices.is_empty() {
        return Err(SensorError::EmptyFootprint);
    }
    Ok(FootprintPolygon {
        vertices,
        epoch,
        satellite_id,
    })
}

/// Instantaneous nadir-pointing footprint of satellite `el` at time `t`.
pub fn footprint(
    el: &OrbitalElements,
    earth: &EarthModel,
    s: &SensorModel,
    t: f64,
    satellite_id: usize,
) -> Result<FootprintPolygon, SensorError> {
    footprint_from_state(&ecef_state(el, earth, t), earth, s, t, satellite_id)
}

/// Great-circle angle (rad) between two points given as (lon, lat) in rad.
pub fn central_angle(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dlon, dlat) = (b.0 - a.0, b.1 - a.1);
    let h = (dlat / 2.0).sin().powi(2) + a.1.cos() * b.1.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * h.sqrt().min(1.0).asin()
}
