fn main() {
    std::process::exit(monotrend::cli::run(std::env::args_os()));
}
