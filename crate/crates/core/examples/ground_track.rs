//! Subsatellite track of one circular orbit over three nodal periods, as CSV.

use walkeropt::orbit::{ground_track, nodal_period};
use walkeropt::{EarthModel, OrbitalElements};

fn main() {
    let earth = EarthModel::WGS84;
    let el =
        OrbitalElements::new(8576.0, 0.0, 38f64.to_radians(), 0.0, 0.0, 0.0, 0.0, &earth).unwrap();
    let span = 3.0 * nodal_period(&el, &earth);
    let track = ground_track(&el, &earth, 0.0, span, 301).unwrap();
    let max_lat = track
        .samples
        .iter()
        .map(|s| s.lat.abs())
        .fold(0.0, f64::max);
    eprintln!(
        "{} samples over {span:.0} s, max |lat| {:.6} deg",
        track.samples.len(),
        max_lat.to_degrees()
    );
    print!("{}", track.to_csv());
}
