fn main() {
    std::process::exit(qknot::cli::main());
}
