fn main() {
    std::process::exit(conic_games::cli::run());
}
