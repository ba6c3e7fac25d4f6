fn main() {
    std::process::exit(steerpdo::cli::run(std::env::args_os()));
}
