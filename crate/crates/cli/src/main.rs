fn main() {
    std::process::exit(horocone_cli::main_with(std::env::args_os()));
}
