//! Classical orbital elements under a secular J2 model, and the subsatellite
//! ground track they trace.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OrbitError {
    #[error("invalid orbital element {field}: {reason}")]
    InvalidElement { field: &'static str, reason: String },
    #[error("invalid earth model field {field}: {reason}")]
    InvalidEarth { field: &'static str, reason: String },
    #[error("invalid time range: start {start} s, end {end} s, {samples} samples")]
    InvalidTimeRange {
        start: f64,
        end: f64,
        samples: usize,
    },
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_two_pi(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let a = wrap_two_pi(angle);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Reference ellipsoid, gravity and rotation constants.
///
/// Lengths are in km, angles in rad, rates in rad/s. `sg0` is the Greenwich
/// sidereal angle at the simulation reference time `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarthModel {
    pub re: f64,
    pub e2: f64,
    pub omega_e: f64,
    pub mu: f64,
    pub j2: f64,
    pub sg0: f64,
}

impl Default for EarthModel {
    fn default() -> Self {
        Self::WGS84
    }
}

impl EarthModel {
    /// WGS84 ellipsoid with EGM96 J2 and GM.
    pub const WGS84: EarthModel = EarthModel {
        re: 6378.137,
        e2: 6.69437999e-3,
        omega_e: 7.2921159e-5,
        mu: 398600.4418,
        j2: 1.08263e-3,
        sg0: 0.0,
    };

    pub fn validate(&self) -> Result<(), OrbitError> {
        let positive = [
            ("re", self.re),
            ("e2", self.e2),
            ("omega_e", self.omega_e),
            ("mu", self.mu),
            ("j2", self.j2),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(OrbitError::InvalidEarth {
                    field,
                    reason: format!("must be finite and > 0, got {v}"),
                });
            }
        }
        if self.e2 >= 1.0 {
            return Err(OrbitError::InvalidEarth {
                field: "e2",
                reason: format!("must be < 1, got {}", self.e2),
            });
        }
        if !(0.0..TAU).contains(&self.sg0) {
            return Err(OrbitError::InvalidEarth {
                field: "sg0",
                reason: format!("must be in [0, 2π), got {}", self.sg0),
            });
        }
        Ok(())
    }

    /// Polar semi-axis in km.
    pub fn polar_radius(&self) -> f64 {
        self.re * (1.0 - self.e2).sqrt()
    }

    /// Greenwich sidereal angle at time `t` (s since reference).
    pub fn sidereal_angle(&self, t: f64) -> f64 {
        self.sg0 + self.omega_e * t
    }
}

/// Mean classical elements at `epoch` (s since the simulation reference).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalElements {
    /// Semi-major axis, km.
    pub a: f64,
    pub e: f64,
    /// Inclination, rad.
    pub i: f64,
    /// Longitude of the ascending node, rad.
    pub raan: f64,
    /// Argument of periapsis, rad.
    pub argp: f64,
    pub mean_anomaly: f64,
    pub epoch: f64,
}

impl OrbitalElements {
    /// Builds and validates an element set against `earth`. `raan`, `argp`
    /// and `mean_anomaly` are wrapped into `[0, 2π)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        e: f64,
        i: f64,
        raan: f64,
        argp: f64,
        mean_anomaly: f64,
        epoch: f64,
        earth: &EarthModel,
    ) -> Result<Self, OrbitError> {
        let el = Self {
            a,
            e,
            i,
            raan: wrap_two_pi(raan),
            argp: wrap_two_pi(argp),
            mean_anomaly: wrap_two_pi(mean_anomaly),
            epoch,
        };
        el.validate(earth)?;
        Ok(el)
    }

    pub fn validate(&self, earth: &EarthModel) -> Result<(), OrbitError> {
        if !(self.e.is_finite() && (0.0..1.0).contains(&self.e)) {
            return Err(OrbitError::InvalidElement {
                field: "e",
                reason: format!("eccentricity must be in [0, 1), got {}", self.e),
            });
        }
        if !(self.a.is_finite() && self.a * (1.0 - self.e) > earth.re) {
            return Err(OrbitError::InvalidElement {
                field: "a",
                reason: format!(
                    "perigee radius {} km must exceed Re = {} km",
                    self.a * (1.0 - self.e),
                    earth.re
                ),
            });
        }
        if !(self.i.is_finite() && (0.0..=PI).contains(&self.i)) {
            return Err(OrbitError::InvalidElement {
                field: "i",
                reason: format!("inclination must be in [0, π], got {}", self.i),
            });
        }
        for (field, v) in [
            ("raan", self.raan),
            ("argp", self.argp),
            ("mean_anomaly", self.mean_anomaly),
        ] {
            if !(v.is_finite() && (0.0..TAU).contains(&v)) {
                return Err(OrbitError::InvalidElement {
                    field,
                    reason: format!("angle must be in [0, 2π), got {v}"),
                });
            }
        }
        if !self.epoch.is_finite() {
            return Err(OrbitError::InvalidElement {
                field: "epoch",
                reason: "epoch must be finite".into(),
            });
        }
        Ok(())
    }

    /// Keplerian mean motion `sqrt(mu / a^3)`, rad/s.
    pub fn mean_motion(&self, earth: &EarthModel) -> f64 {
        (earth.mu / self.a.powi(3)).sqrt()
    }
}

/// Secular drift rates of Ω, ω and M under J2, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRates {
    pub raan: f64,
    pub argp: f64,
    pub mean_anomaly: f64,
}

pub fn secular_rates(el: &OrbitalElements, earth: &EarthModel) -> Result<SecularRates, OrbitError> {
    if !(el.a > 0.0) {
        return Err(OrbitError::InvalidElement {
            field: "a",
            reason: format!("semi-major axis must be > 0, got {}", el.a),
        });
    }
    if !(0.0..1.0).contains(&el.e) {
        return Err(OrbitError::InvalidElement {
            field: "e",
            reason: format!("eccentricity must be in [0, 1), got {}", el.e),
        });
    }
    let n = el.mean_motion(earth);
    let one_minus_e2 = 1.0 - el.e * el.e;
    let sin2i = el.i.sin().powi(2);
    let k = 3.0 * n * earth.j2 * earth.re.powi(2) / (2.0 * el.a.powi(2) * one_minus_e2.powi(2));
    let raan = -k * el.i.cos();
    let argp = -k * (2.5 * sin2i - 2.0);
    let mean_anomaly = n - 3.0 * n * earth.j2 / (2.0 * one_minus_e2.powi(3).sqrt())
        * (earth.re / el.a).powi(2)
        * (1.5 * sin2i - 1.0);
    Ok(SecularRates {
        raan,
        argp,
        mean_anomaly,
    })
}

/// Eccentric anomaly from mean anomaly by Newton iteration.
///
/// Starts from `E = M`, stops when the step falls below 1e-12 rad or after
/// 50 iterations. Returns `M` unchanged for circular orbits.
pub fn eccentric_anomaly(mean_anomaly: f64, e: f64) -> f64 {
    if e == 0.0 {
        return mean_anomaly;
    }
    let m = wrap_pi(mean_anomaly);
    let mut ecc = m;
    for _ in 0..50 {
        let f = ecc - e * ecc.sin() - m;
        let step = f / (1.0 - e * ecc.cos());
        ecc -= step;
        if step.abs() < 1e-12 {
            break;
        }
    }
    // shift back onto the branch of the caller's mean anomaly
    ecc + (mean_anomaly - m)
}

pub fn true_from_eccentric(ecc: f64, e: f64) -> f64 {
    if e == 0.0 {
        return ecc;
    }
    let half = ((1.0 + e) / (1.0 - e)).sqrt() * (ecc / 2.0).tan();
    let f = 2.0 * half.atan();
    // keep the revolution count of `ecc`
    f + TAU * ((ecc + PI) / TAU).floor()
}

pub fn true_anomaly(mean_anomaly: f64, e: f64) -> f64 {
    if e == 0.0 {
        return mean_anomaly;
    }
    true_from_eccentric(eccentric_anomaly(mean_anomaly, e), e)
}

/// Mean anomaly for a given true anomaly (inverse Kepler relation).
pub fn mean_from_true(true_anomaly: f64, e: f64) -> f64 {
    if e == 0.0 {
        return true_anomaly;
    }
    let ecc = 2.0 * (((1.0 - e) / (1.0 + e)).sqrt() * (true_anomaly / 2.0).tan()).atan();
    let ecc = ecc + TAU * ((true_anomaly + PI) / TAU).floor();
    ecc - e * ecc.sin()
}

/// Elements advanced to time `t` by the secular rates: a, e, i fixed,
/// Ω, ω, M linear in `t - epoch`. Angles are left unwrapped.
#[derive(Debug, Clone, Copy)]
pub struct PropagatedElements {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub mean_anomaly: f64,
    pub true_anomaly: f64,
}

impl PropagatedElements {
    /// Argument of latitude `ω + f`.
    pub fn arg_latitude(&self) -> f64 {
        self.argp + self.true_anomaly
    }
}

pub fn propagate(el: &OrbitalElements, earth: &EarthModel, t: f64) -> PropagatedElements {
    // validated elements always satisfy the secular_rates domain
    let rates = secular_rates(el, earth).expect("validated elements");
    let dt = t - el.epoch;
    let mean_anomaly = el.mean_anomaly + rates.mean_anomaly * dt;
    PropagatedElements {
        a: el.a,
        e: el.e,
        i: el.i,
        raan: el.raan + rates.raan * dt,
        argp: el.argp + rates.argp * dt,
        mean_anomaly,
        true_anomaly: true_anomaly(mean_anomaly, el.e),
    }
}

/// Subsatellite longitude and latitude (rad) at time `t`.
///
/// Latitude is `asin(sin i · sin u)`; longitude is the node longitude plus
/// the in-plane angle `atan2(cos i · sin u, cos u)`, minus the Greenwich
/// sidereal angle. Longitude is wrapped to `(-π, π]`.
pub fn subsatellite_point(el: &OrbitalElements, earth: &EarthModel, t: f64) -> (f64, f64) {
    let p = propagate(el, earth, t);
    let u = p.arg_latitude();
    let lat = (p.i.sin() * u.sin()).clamp(-1.0, 1.0).asin();
    let in_plane = (p.i.cos() * u.sin()).atan2(u.cos());
    let lon = p.raan + in_plane - earth.sidereal_angle(t);
    (wrap_pi(lon), lat.clamp(-FRAC_PI_2, FRAC_PI_2))
}

/// Nodal period: time between successive ascending-node crossings, from the
/// secular rates of ω and M.
pub fn nodal_period(el: &OrbitalElements, earth: &EarthModel) -> f64 {
    let rates = secular_rates(el, earth).expect("validated elements");
    TAU / (rates.mean_anomaly + rates.argp)
}

/// Westward shift of the ground track between adjacent ascending-node
/// crossings: `-(ωE - dΩ/dt) · T` with `T` the nodal period.
pub fn longitude_shift_per_period(el: &OrbitalElements, earth: &EarthModel) -> f64 {
    let rates = secular_rates(el, earth).expect("validated elements");
    -(earth.omega_e - rates.raan) * nodal_period(el, earth)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackSample {
    pub t: f64,
    pub lon: f64,
    pub lat: f64,
}

/// Time-ordered subsatellite points; longitudes stored wrapped to `(-π, π]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTrack {
    pub samples: Vec<TrackSample>,
}

impl GroundTrack {
    /// Longitudes unwrapped into a continuous sequence (for export/plotting).
    pub fn unwrapped_longitudes(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.samples.len());
        let mut prev: Option<f64> = None;
        for s in &self.samples {
            let lon = match prev {
                None => s.lon,
                Some(p) => p + wrap_pi(s.lon - p),
            };
            out.push(lon);
            prev = Some(lon);
        }
        out
    }

    /// CSV with header `t_s,lon_deg,lat_deg`, 9 decimal places.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,lon_deg,lat_deg\n");
        for s in &self.samples {
            let lon = s.lon.to_degrees();
            // formatting may round 180 - ε up to 180, never down to -180
            let lon = if lon <= -180.0 { lon + 360.0 } else { lon };
            out.push_str(&format!(
                "{:.9},{:.9},{:.9}\n",
                s.t,
                lon,
                s.lat.to_degrees()
            ));
        }
        out
    }
}

pub fn ground_track(
    el: &OrbitalElements,
    earth: &EarthModel,
    t_start: f64,
    t_end: f64,
    n_samples: usize,
) -> Result<GroundTrack, OrbitError> {
    if !(t_end > t_start) || n_samples < 2 || !t_start.is_finite() || !t_end.is_finite() {
        return Err(OrbitError::InvalidTimeRange {
            start: t_start,
            end: t_end,
            samples: n_samples,
        });
    }
    let step = (t_end - t_start) / (n_samples - 1) as f64;
    let samples = (0..n_samples)
        .map(|k| {
            let t = if k == n_samples - 1 {
                t_end
            } else {
                t_start + step * k as f64
            };
            let (lon, lat) = subsatellite_point(el, earth, t);
            TrackSample { t, lon, lat }
        })
        .collect();
    Ok(GroundTrack { samples })
}
