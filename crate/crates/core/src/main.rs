fn main() {
    std::process::exit(rrloc::cli::main());
}
