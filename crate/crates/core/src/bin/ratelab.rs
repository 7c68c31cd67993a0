fn main() -> std::process::ExitCode {
    ratelab::cli::run(std::env::args_os())
}
