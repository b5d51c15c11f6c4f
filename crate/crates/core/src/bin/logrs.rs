fn main() {
    std::process::exit(logrs::cli::run(std::env::args_os()));
}
