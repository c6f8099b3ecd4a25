fn main() {
    std::process::exit(chainwalk::cli::main_with_exit_code());
}
