fn main() {
    std::process::exit(hyperorbit::cli::main());
}
