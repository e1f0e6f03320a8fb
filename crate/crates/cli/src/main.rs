fn main() {
    std::process::exit(solitons_cli::main_with_args(std::env::args().collect()));
}
