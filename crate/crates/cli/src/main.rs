use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use indexlab_cli::{configure_threads, run, Cli, EXIT_BAD_INPUT, THREADS_VAR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(std::env::var(THREADS_VAR).ok().as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_BAD_INPUT as u8);
    }
    let out = run(&cli.command);
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
