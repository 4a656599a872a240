fn main() {
    std::process::exit(superdense::cli::run(std::env::args_os()));
}
