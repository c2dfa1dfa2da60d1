use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod load;

use args::Cli;

/// A run that did not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, parse errors, unknown theories, signature conflicts.
    Usage(String),
    /// A rejected proof or model, or an I/O failure in the cache.
    Internal(String),
}

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Yes = 0,
    No = 1,
    Unknown = 2,
    Usage = 3,
    Internal = 4,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Yes };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let exit = match commands::run(&cli) {
        Ok(exit) => exit,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg.trim_end());
            Exit::Usage
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {}", msg.trim_end());
            Exit::Internal
        }
    };
    ExitCode::from(exit as u8)
}
