fn main() {
    std::process::exit(bipara_cli::run(std::env::args_os()));
}
