fn main() {
    std::process::exit(hscale_cli::run(std::env::args_os()));
}
