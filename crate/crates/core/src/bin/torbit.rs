fn main() {
    std::process::exit(toric_orbits::cli::run());
}
