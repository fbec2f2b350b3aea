fn main() {
    std::process::exit(foundry::cli::run(std::env::args_os()));
}
