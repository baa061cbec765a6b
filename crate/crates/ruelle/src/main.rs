fn main() {
    std::process::exit(ruelle::cli_main());
}
