fn main() {
    std::process::exit(robust_overparam::harness::cli::run(std::env::args_os()));
}
