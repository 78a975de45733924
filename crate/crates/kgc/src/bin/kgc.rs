use std::process::ExitCode;

fn main() -> ExitCode {
    kgc::cli::run(std::env::args_os())
}
