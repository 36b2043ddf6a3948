use std::process::ExitCode;

fn main() -> ExitCode {
    cartan_ho_lab::cli::run(std::env::args_os())
}
