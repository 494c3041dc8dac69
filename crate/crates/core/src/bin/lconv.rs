fn main() {
    std::process::exit(liouville_conv::cli::run(std::env::args_os()));
}
