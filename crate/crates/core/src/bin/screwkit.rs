fn main() {
    std::process::exit(screwkit::cli::run(std::env::args_os()))
}
