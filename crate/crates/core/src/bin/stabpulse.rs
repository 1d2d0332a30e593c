fn main() {
    std::process::exit(stabpulse::cli::run(std::env::args_os()));
}
