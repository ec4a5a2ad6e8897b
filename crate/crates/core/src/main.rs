fn main() {
    std::process::exit(polyweb::cli::run(std::env::args_os()));
}
