fn main() {
    std::process::exit(poncelet::cli::main_entry());
}
