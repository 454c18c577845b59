fn main() {
    std::process::exit(covarray::cli::main());
}
