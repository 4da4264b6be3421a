use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use sharkovsky_lab::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    if let Err(e) = run(cli, &mut out) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    if let Err(e) = out.flush() {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
