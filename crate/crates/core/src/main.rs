fn main() {
    std::process::exit(ggsum::cli::run(std::env::args_os()));
}
