//! Runs the bundled reference scenario through the CLI entry point.
//!
//! Usage: `cargo run --release --example reproduce -- [--seed N] [--out-dir DIR]`

fn main() {
    let args = std::iter::once("walkeropt".to_string())
        .chain(std::iter::once("reproduce".to_string()))
        .chain(std::env::args().skip(1));
    std::process::exit(walkeropt::cli::run(args));
}
