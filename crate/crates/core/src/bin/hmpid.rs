fn main() {
    std::process::exit(hmpid::cli::run(std::env::args_os()));
}
