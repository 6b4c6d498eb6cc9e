fn main() {
    std::process::exit(rfbeats_cli::cli_main());
}
