fn main() {
    std::process::exit(cayley_transpose::cli::main_entry());
}
