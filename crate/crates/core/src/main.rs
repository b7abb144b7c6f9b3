fn main() {
    std::process::exit(invbar::cli::run(std::env::args_os()));
}
