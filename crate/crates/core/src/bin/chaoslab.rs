fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let seed = std::env::var(chaoslab::cli::SEED_ENV).ok();
    std::process::exit(chaoslab::cli::main_with(&argv, seed.as_deref()));
}
