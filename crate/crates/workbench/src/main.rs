fn main() {
    std::process::exit(pi_workbench::cli::main_with_args(std::env::args_os()));
}
