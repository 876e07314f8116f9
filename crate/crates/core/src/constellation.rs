//! Walker-δ shells and constellation element sets.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::orbit::{mean_from_true, EarthModel, OrbitError, OrbitalElements};

#[derive(Debug, Error, PartialEq)]
pub enum ConstellationError {
    #[error("invalid Walker shell {n}/{p}/{f}: {reason}")]
    InvalidShell {
        n: usize,
        p: usize,
        f: usize,
        reason: String,
    },
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// One Walker-δ shell `i: N/P/F`. Angles in rad, `a` in km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkerShell {
    pub n_sats: usize,
    pub n_planes: usize,
    pub phase_factor: usize,
    pub inclination: f64,
    pub a: f64,
    pub e: f64,
    pub argp: f64,
    pub raan0: f64,
    pub epoch: f64,
}

impl WalkerShell {
    /// Circular shell with `argp = 0`, `raan0 = 0` at epoch 0.
    pub fn circular(
        n_sats: usize,
        n_planes: usize,
        phase_factor: usize,
        inclination: f64,
        a: f64,
    ) -> Self {
        Self {
            n_sats,
            n_planes,
            phase_factor,
            inclination,
            a,
            e: 0.0,
            argp: 0.0,
            raan0: 0.0,
            epoch: 0.0,
        }
    }

    pub fn sats_per_plane(&self) -> usize {
        self.n_sats / self.n_planes.max(1)
    }

    pub fn validate(&self) -> Result<(), ConstellationError> {
        let err = |reason: String| ConstellationError::InvalidShell {
            n: self.n_sats,
            p: self.n_planes,
            f: self.phase_factor,
            reason,
        };
        if self.n_planes < 1 {
            return Err(err("need at least one plane".into()));
        }
        if self.n_sats < self.n_planes || !self.n_sats.is_multiple_of(self.n_planes) {
            return Err(err("N must be a positive multiple of P".into()));
        }
        if self.phase_factor >= self.n_planes {
            return Err(err("F must lie in [0, P-1]".into()));
        }
        Ok(())
    }

    /// Walker code `N/P/F`.
    pub fn code(&self) -> String {
        format!("{}/{}/{}", self.n_sats, self.n_planes, self.phase_factor)
    }
}

/// Plane index (1-based), in-plane index (1-based), node offset and argument
/// of latitude (both rad, before `raan0`) of satellite `m` (1-based).
pub fn walker_slot(shell: &WalkerShell, m: usize) -> (usize, usize, f64, f64) {
    let s = shell.sats_per_plane();
    let plane = m.div_ceil(s);
    let in_plane = m - (plane - 1) * s;
    let node = TAU / shell.n_planes as f64 * (plane - 1) as f64;
    let arg_lat = TAU / s as f64 * (in_plane - 1) as f64
        + TAU / shell.n_sats as f64 * shell.phase_factor as f64 * (plane - 1) as f64;
    (plane, in_plane, node, arg_lat)
}

/// Element sets for satellites `m = 1..=N` of the shell, in order.
///
/// The argument of latitude is realized as `argp + f` at epoch, with the
/// mean anomaly recovered through the inverse Kepler relation (for circular
/// shells `M = u - argp`).
pub fn shell_elements(
    shell: &WalkerShell,
    earth: &EarthModel,
) -> Result<Vec<OrbitalElements>, ConstellationError> {
    shell.validate()?;
    (1..=shell.n_sats)
        .map(|m| {
            let (_, _, node, arg_lat) = walker_slot(shell, m);
            let true_anomaly = arg_lat - shell.argp;
            let mean_anomaly = mean_from_true(true_anomaly, shell.e);
            Ok(OrbitalElements::new(
                shell.a,
                shell.e,
                shell.inclination,
                shell.raan0 + node,
                shell.argp,
                mean_anomaly,
                shell.epoch,
                earth,
            )?)
        })
        .collect()
}

/// Satellite identifier: shell index (0-based) and Walker index `m` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SatelliteId {
    pub shell: usize,
    pub m: usize,
}

/// A list of independent Walker shells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstellationConfig {
    pub shells: Vec<WalkerShell>,
}

impl ConstellationConfig {
    pub fn new(shells: Vec<WalkerShell>) -> Result<Self, ConstellationError> {
        for s in &shells {
            s.validate()?;
        }
        Ok(Self { shells })
    }

    pub fn single(shell: WalkerShell) -> Result<Self, ConstellationError> {
        Self::new(vec![shell])
    }

    pub fn total_sats(&self) -> usize {
        self.shells.iter().map(|s| s.n_sats).sum()
    }

    /// Human-readable summary such as `i=38.0° 54/9/1`.
    pub fn describe(&self) -> String {
        if self.shells.is_empty() {
            return "(empty)".into();
        }
        self.shells
            .iter()
            .map(|s| format!("i={:.2}° {}", s.inclination.to_degrees(), s.code()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn all_elements(
    config: &ConstellationConfig,
    earth: &EarthModel,
) -> Result<Vec<(SatelliteId, OrbitalElements)>, ConstellationError> {
    let mut out = Vec::with_capacity(config.total_sats());
    for (k, shell) in config.shells.iter().enumerate() {
        for (idx, el) in shell_elements(shell, earth)?.into_iter().enumerate() {
            out.push((
                SatelliteId {
                    shell: k,
                    m: idx + 1,
                },
                el,
            ));
        }
    }
    Ok(out)
}

/// CSV `shell,sat_id,a_km,e,i_deg,raan_deg,argp_deg,M_deg`.
pub fn elements_csv(elements: &[(SatelliteId, OrbitalElements)]) -> String {
    let mut out = String::from("shell,sat_id,a_km,e,i_deg,raan_deg,argp_deg,M_deg\n");
    for (id, el) in elements {
        out.push_str(&format!(
            "{},{},{:.6},{:.9},{:.9},{:.9},{:.9},{:.9}\n",
            id.shell,
            id.m,
            el.a,
            el.e,
            el.i.to_degrees(),
            el.raan.to_degrees(),
            el.argp.to_degrees(),
            el.mean_anomaly.to_degrees()
        ));
    }
    out
}
