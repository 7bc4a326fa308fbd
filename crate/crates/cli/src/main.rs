fn main() {
    std::process::exit(catcodes_cli::main_with_args(std::env::args_os()));
}
