fn main() {
    std::process::exit(h2p_cli::cli::main_with(std::env::args_os()));
}
