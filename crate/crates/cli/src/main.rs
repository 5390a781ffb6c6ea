fn main() {
    std::process::exit(dwellcert_cli::run());
}
