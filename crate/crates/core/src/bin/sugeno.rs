fn main() {
    std::process::exit(sugeno_core::cli::run(std::env::args().collect()));
}
