use std::process::ExitCode;

fn main() -> ExitCode {
    cvteleport::cli::main_with_args(std::env::args_os())
}
