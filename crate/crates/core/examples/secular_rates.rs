//! J2 secular drift rates and the westward ground-track shift per nodal period.

use walkeropt::orbit::{longitude_shift_per_period, nodal_period, secular_rates};
use walkeropt::{EarthModel, OrbitalElements};

fn main() {
    let earth = EarthModel::WGS84;
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>10} {:>10}",
        "i_deg", "dRAAN/dt", "dargp/dt", "dM/dt", "T_s", "shift_deg"
    );
    for i_deg in [0.0, 30.0, 38.0, 63.4349, 90.0, 98.0] {
        let el = OrbitalElements::new(
            8576.0,
            0.0,
            f64::to_radians(i_deg),
            0.0,
            0.0,
            0.0,
            0.0,
            &earth,
        )
        .unwrap();
        let r = secular_rates(&el, &earth).unwrap();
        println!(
            "{:>6.2} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.1} {:>10.4}",
            i_deg,
            r.raan,
            r.argp,
            r.mean_anomaly,
            nodal_period(&el, &earth),
            longitude_shift_per_period(&el, &earth).to_degrees()
        );
    }
}
