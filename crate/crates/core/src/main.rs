fn main() {
    std::process::exit(spectral_filter::cli::run(std::env::args_os()));
}
