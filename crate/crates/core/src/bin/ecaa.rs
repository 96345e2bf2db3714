fn main() {
    std::process::exit(ecaa::cli::main_with_args(std::env::args_os()));
}
