//! `ptosc` command-line front end over `ptosc-core`.

use std::process::ExitCode;

use clap::Parser;

use ptosc_core::Error;

pub mod args;
pub mod commands;
pub mod output;
pub mod verify;

use args::{Cli, Command};

/// Map core errors onto the documented exit-code protocol.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::SingularParameters(_) => 2,
        Error::NumericalFailure { .. }
        | Error::DegenerateMode(_)
        | Error::DegreeCapacity { .. } => 3,
    }
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 2 on usage errors, 0 for --help/--version
        Err(e) => e.exit(),
    };
    let outcome = match &cli.command {
        Command::Spectrum(args) => commands::cmd_spectrum(args).map(|()| 0),
        Command::PhaseDiagram(args) => commands::cmd_phase_diagram(args).map(|()| 0),
        Command::Classical(args) => commands::cmd_classical(args).map(|()| 0),
        Command::Verify(args) => verify::cmd_verify(args),
        Command::Adjoint(args) => commands::cmd_adjoint(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
