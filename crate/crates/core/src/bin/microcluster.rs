fn main() {
    std::process::exit(microcluster::cli::dispatch(std::env::args_os()));
}
