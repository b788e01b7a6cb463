use std::process::ExitCode;

use clap::Parser;

use toresolve_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("toresolve: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
