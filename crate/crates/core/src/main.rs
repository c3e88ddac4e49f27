fn main() {
    std::process::exit(ionet::cli::run(std::env::args_os()));
}
