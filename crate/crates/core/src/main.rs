fn main() {
    std::process::exit(atomic_arb::cli::main_with_args(std::env::args_os()));
}
