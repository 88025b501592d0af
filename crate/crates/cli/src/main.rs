fn main() {
    std::process::exit(qdcomp_cli::main_with_args(std::env::args_os()));
}
