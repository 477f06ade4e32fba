use std::process::ExitCode;

fn main() -> ExitCode {
    ptosc::run()
}
