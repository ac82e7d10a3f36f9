fn main() {
    std::process::exit(kappamu::cli::main_with_args(std::env::args_os()));
}
