fn main() {
    std::process::exit(invariance_lab::cli_main(std::env::args_os()));
}
