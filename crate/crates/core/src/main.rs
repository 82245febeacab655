fn main() {
    std::process::exit(seatpack::cli::run_from_args());
}
