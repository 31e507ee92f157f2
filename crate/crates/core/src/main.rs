fn main() {
    std::process::exit(bdcodes::cli::run(std::env::args_os()));
}
