fn main() {
    std::process::exit(qmac::cli::main_with_args(std::env::args_os()));
}
