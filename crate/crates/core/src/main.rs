fn main() {
    std::process::exit(ctqw::cli::run())
}
