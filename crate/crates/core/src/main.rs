fn main() {
    std::process::exit(propdel::cli::main());
}
