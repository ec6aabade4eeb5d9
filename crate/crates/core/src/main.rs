fn main() {
    std::process::exit(nctorus::cli::run(std::env::args_os()));
}
