fn main() {
    std::process::exit(lebp::cli::main_with_args(std::env::args_os()));
}
