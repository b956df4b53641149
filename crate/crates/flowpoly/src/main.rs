fn main() {
    std::process::exit(flowpoly::cli::main_with(std::env::args_os()));
}
