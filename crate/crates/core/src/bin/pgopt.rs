fn main() {
    std::process::exit(pgopt::experiments::cli_main(std::env::args_os()));
}
