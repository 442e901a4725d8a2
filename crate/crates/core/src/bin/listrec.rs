fn main() {
    std::process::exit(frs_listrec::cli::run(std::env::args_os()));
}
