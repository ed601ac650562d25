fn main() {
    std::process::exit(clipnoise::cli::run(std::env::args_os()));
}
