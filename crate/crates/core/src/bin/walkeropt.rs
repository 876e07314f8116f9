fn main() {
    std::process::exit(walkeropt::cli::run(std::env::args_os()));
}
