//! Loads a scenario file (or the bundled one) and prints its fully resolved TOML.

use walkeropt::cli::REPRODUCE_SCENARIO;
use walkeropt::io::{dump_scenario, load_scenario, parse_scenario};

fn main() {
    let cfg = match std::env::args().nth(1) {
        Some(path) => load_scenario(path.as_ref()),
        None => parse_scenario(REPRODUCE_SCENARIO),
    };
    match cfg {
        Ok(cfg) => print!("{}", dump_scenario(&cfg)),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
