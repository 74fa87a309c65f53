fn main() {
    std::process::exit(legwave::cli::run(std::env::args_os()));
}
