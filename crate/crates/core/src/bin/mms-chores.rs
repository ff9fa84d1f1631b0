fn main() {
    std::process::exit(mms_chores::cli::run_cli(std::env::args_os()));
}
