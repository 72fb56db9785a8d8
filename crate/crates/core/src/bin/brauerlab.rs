fn main() {
    std::process::exit(brauerlab::cli::run());
}
