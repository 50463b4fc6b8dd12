use std::process::ExitCode;

fn main() -> ExitCode {
    equiclass::cli::run()
}
