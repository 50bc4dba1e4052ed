fn main() {
    std::process::exit(weaktype::cli::run(std::env::args_os()));
}
