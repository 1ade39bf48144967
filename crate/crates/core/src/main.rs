fn main() {
    std::process::exit(lel_core::cli::run(std::env::args_os()));
}
