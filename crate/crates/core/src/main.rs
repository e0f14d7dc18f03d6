fn main() {
    let code = ybe_reflect::cli::run_from_env();
    std::process::exit(code);
}
