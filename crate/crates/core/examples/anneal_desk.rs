//! Reduced-fidelity annealing run: 1° cells, 20 epochs over 5 periods.
//!
//! Usage: `cargo run --release --example anneal_desk -- [seed] [t_min] [alpha]`

use walkeropt::cli::REPRODUCE_SCENARIO;
use walkeropt::io::parse_scenario;
use walkeropt::optimizer::history_csv;
use walkeropt::{optimize, Scenario};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |k: usize, default: f64| {
        args.get(k)
            .map_or(default, |s| s.parse().expect("numeric argument"))
    };
    let mut cfg = parse_scenario(REPRODUCE_SCENARIO).unwrap();
    cfg.grid.cell_radius_deg = 1.0;
    cfg.annealing.n_epochs = 20;
    cfg.annealing.n_periods = 5;
    cfg.annealing.seed = arg(0, 1.0) as u64;
    cfg.annealing.t_min = arg(1, 0.1);
    cfg.annealing.alpha = arg(2, 0.9);
    cfg.validate().unwrap();

    let initial = cfg.initial_constellation();
    let params = cfg.annealing_params();
    let scenario = Scenario::with_sampled_epochs(
        cfg.earth_model(),
        cfg.sensor_model(),
        cfg.grid().unwrap(),
        &initial,
        params.n_periods,
        params.n_epochs,
        params.rng_seed,
    )
    .unwrap();
    let result = optimize(&initial, &params, &scenario).unwrap();
    print!("{}", history_csv(&result.history));
    match &result.best {
        Some(b) => eprintln!(
            "best {} coverage {:.4} at iteration {}",
            b.config.describe(),
            b.coverage,
            b.iteration
        ),
        None => eprintln!(
            "no feasible configuration in {} iterations",
            result.iterations
        ),
    }
}
