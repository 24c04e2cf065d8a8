fn main() {
    std::process::exit(tightcover::cli::run(std::env::args_os()));
}
