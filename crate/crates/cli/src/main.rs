fn main() {
    std::process::exit(hatescan_cli::run(std::env::args_os()));
}
