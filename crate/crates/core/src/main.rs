fn main() {
    std::process::exit(polybalance::cli::main_with_args(std::env::args_os()));
}
