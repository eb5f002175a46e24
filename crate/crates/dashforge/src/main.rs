use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(dashforge::cli::run().clamp(0, u8::MAX as i32) as u8)
}
