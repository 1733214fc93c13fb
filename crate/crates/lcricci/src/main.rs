fn main() {
    std::process::exit(lcricci::cli::main());
}
