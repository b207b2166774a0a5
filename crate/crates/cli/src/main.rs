fn main() {
    std::process::exit(lulu_cli::run(std::env::args_os()));
}
