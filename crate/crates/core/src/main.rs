fn main() {
    std::process::exit(kisinvar::cli::run(std::env::args_os()));
}
