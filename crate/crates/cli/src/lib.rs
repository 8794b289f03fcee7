//! Command-line front end for `frobstab`: argument parsing, report
//! rendering, and the grid self-check.

pub mod args;
pub mod commands;
pub mod fuzz;
pub mod output;
pub mod selfcheck;

use clap::Parser;

use args::Cli;
use output::{render, EXIT_HYPOTHESIS, EXIT_VALIDATION};

/// Parses `argv`, runs the request and returns `(stdout, stderr, exit code)`.
pub fn execute<I, T>(argv: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            return if code == 0 {
                (e.to_string(), String::new(), 0)
            } else {
                (String::new(), e.to_string(), code)
            };
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            let err = if outcome.exit == EXIT_HYPOTHESIS {
                "error: no bound on I(F_*E) has its hypotheses satisfied (see \"skipped\"); rerun with --force\n".to_string()
            } else {
                String::new()
            };
            (render(&outcome.report, cli.format), err, outcome.exit)
        }
        Err(err) => (String::new(), format!("error: {err}\n"), err.exit_code()),
    }
}
