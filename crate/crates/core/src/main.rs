fn main() {
    std::process::exit(schubert_bethe::cli::run(std::env::args_os()));
}
