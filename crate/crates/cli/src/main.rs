//! `tclab`: command-line front end for the theory-combination laboratory.
//!
//! Exit codes: 0 on success, 1 when a check ran and refuted its property
//! (or a witness failed verification), 2 on usage, input or library errors.

mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var("TCLAB_THREADS") else { return Ok(()) };
    let n: usize = text.trim().parse().map_err(|_| format!("TCLAB_THREADS must be a positive integer, got `{text}`"))?;
    if n == 0 {
        return Err("TCLAB_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("tclab: {msg}");
        return ExitCode::from(2);
    }
    match run::dispatch(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(if outcome.refuted { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("tclab: {e}");
            ExitCode::from(2)
        }
    }
}
