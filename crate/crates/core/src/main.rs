fn main() {
    std::process::exit(bellforge::cli::run(std::env::args_os()));
}
