fn main() {
    std::process::exit(erlang_spectral::cli::run(std::env::args_os()));
}
