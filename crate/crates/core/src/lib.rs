//! Walker constellation design against a regional average-coverage target.
//!
//! The pipeline: secular-J2 orbit propagation ([`orbit`]), nadir sensor
//! footprints on the WGS84 ellipsoid ([`sensor`]), Walker-δ shells
//! ([`constellation`]), hexagonal-grid coverage counting ([`hexgrid`]) and a
//! simulated-annealing search over shell sizes and inclinations
//! ([`optimizer`]). [`io`] reads scenario files and writes results; [`cli`]
//! drives it all from the command line.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constellation;
pub mod hexgrid;
pub mod io;
pub mod optimizer;
pub mod orbit;
pub mod sensor;

pub use constellation::{ConstellationConfig, WalkerShell};
pub use hexgrid::{tessellate, HexGrid, TargetRegion};
pub use optimizer::{optimize, AnnealingParams, OptimizationResult, Scenario};
pub use orbit::{EarthModel, OrbitalElements};
pub use sensor::{SensorKind, SensorModel};
