fn main() {
    std::process::exit(qcc_lab::cli::main());
}
