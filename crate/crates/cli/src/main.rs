fn main() {
    std::process::exit(bregkit::cli::run(std::env::args_os()));
}
