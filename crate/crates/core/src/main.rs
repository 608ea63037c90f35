fn main() {
    std::process::exit(fano_delta::cli::run(std::env::args_os()));
}
