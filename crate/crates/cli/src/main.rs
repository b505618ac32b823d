fn main() {
    std::process::exit(radspec_cli::run(std::env::args_os()));
}
