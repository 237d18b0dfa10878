fn main() {
    std::process::exit(extfactor::cli::run(std::env::args_os()));
}
