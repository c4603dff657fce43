//! Command-line front end: argument parsing, file I/O and run reports.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use error::CliError;
pub use report::RunReport;

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status. Clap usage errors map to 64; `--help` and
/// `--version` to 0.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return error::SUCCESS;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return error::USAGE;
        }
    };
    match commands::execute(&cli, argv, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "dxz: error: {e}");
            e.exit_code()
        }
    }
}
