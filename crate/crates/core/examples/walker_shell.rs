//! Element table of a Walker 54/9/1 shell at 38° inclination.

use walkeropt::constellation::{all_elements, elements_csv};
use walkeropt::{ConstellationConfig, EarthModel, WalkerShell};

fn main() {
    let shell = WalkerShell::circular(54, 9, 1, 38f64.to_radians(), 8576.0);
    let cfg = ConstellationConfig::single(shell).unwrap();
    eprintln!(
        "{} with {} satellites per plane",
        cfg.describe(),
        shell.sats_per_plane()
    );
    print!(
        "{}",
        elements_csv(&all_elements(&cfg, &EarthModel::WGS84).unwrap())
    );
}
