fn main() {
    std::process::exit(nilsoliton::cli::run());
}
