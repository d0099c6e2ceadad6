fn main() {
    std::process::exit(rsgame::cli::run(std::env::args_os()));
}
