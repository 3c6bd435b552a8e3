fn main() {
    std::process::exit(divisum::cli::run(std::env::args_os()));
}
