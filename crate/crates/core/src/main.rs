fn main() {
    std::process::exit(ptqm::cli::run(std::env::args_os()));
}
