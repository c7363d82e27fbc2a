fn main() {
    std::process::exit(randlab::cli::run(std::env::args_os()));
}
