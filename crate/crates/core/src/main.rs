fn main() {
    std::process::exit(psi_mellin::cli::main_with_args(std::env::args_os()));
}
