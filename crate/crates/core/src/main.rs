fn main() {
    std::process::exit(thv_core::cli::main_with_args(std::env::args_os()));
}
