fn main() {
    std::process::exit(ccring::cli::run(std::env::args_os()));
}
