mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use crate::commands::{run, Cli, CliError};
use crate::config::{expand_args, ExpandError};

fn main() -> ExitCode {
    let args = match expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(ExpandError::Io(e)) => return fail(&CliError::Io(e.to_string())),
        Err(ExpandError::Config(e)) => return fail(&CliError::Config(e.to_string())),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("setlab: {e}");
    ExitCode::from(e.code())
}
