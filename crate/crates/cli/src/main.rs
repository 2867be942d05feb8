fn main() {
    std::process::exit(rfpm_cli::run(std::env::args_os()));
}
