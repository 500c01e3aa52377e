//! Command-line front end: argument parsing, command handlers, the
//! acceptance checks and output formatting.

pub mod args;
pub mod commands;
pub mod output;
pub mod report;

use std::io::Write;
use std::time::Instant;

use lupinch_core::Error;

use args::{Cli, Command, VerifyCommand};
use output::Document;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NON_CONVERGENCE: i32 = 3;
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::Format(_) => exit::USAGE,
        Error::NonConvergence { .. } => exit::NON_CONVERGENCE,
        Error::Hypothesis { .. } => exit::FAILED,
    }
}

pub fn execute(cli: &Cli) -> Result<Document, Error> {
    let g = &cli.global;
    let start = Instant::now();
    let mut doc = match &cli.command {
        Command::Verify(VerifyCommand::Lemma1(a)) => commands::verify_lemma1(g, a)?,
        Command::Verify(VerifyCommand::Lemma2(a)) => commands::verify_lemma2(g, a)?,
        Command::Catalog(m) => commands::catalog(g, m)?,
        Command::Spectrum(s) => commands::spectrum(g, s)?,
        Command::Report => commands::report(g)?,
    };
    if g.timing {
        doc.elapsed_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(doc)
}

/// Run a parsed command line, write its output and return the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(doc) => {
            let text = doc.render(cli.global.format);
            let written = match &cli.global.output {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return exit::FAILED;
            }
            if doc.passed {
                exit::PASS
            } else {
                exit::FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
