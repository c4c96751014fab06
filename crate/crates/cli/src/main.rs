fn main() {
    let code = apnspectra_cli::run(std::env::args().skip(1));
    std::process::exit(code);
}
