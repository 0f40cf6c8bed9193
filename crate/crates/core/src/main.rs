fn main() {
    std::process::exit(exheis::cli::run(std::env::args_os()));
}
