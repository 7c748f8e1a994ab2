fn main() {
    if let Err(e) = harness::cli::main_entry() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
