fn main() {
    std::process::exit(twwtop::cli::run(std::env::args_os()));
}
