fn main() {
    std::process::exit(qfdlog::cli::dispatch(std::env::args_os()));
}
