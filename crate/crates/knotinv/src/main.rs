fn main() {
    std::process::exit(knotinv::cli::run(std::env::args_os()));
}
