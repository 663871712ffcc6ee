fn main() {
    std::process::exit(gsa_pce_cli::run(std::env::args_os()));
}
