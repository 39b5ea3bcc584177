fn main() {
    std::process::exit(conflux::frontend::cli::cli_main());
}
