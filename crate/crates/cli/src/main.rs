use std::fs;
use std::process::ExitCode;

use casurf_cli::commands::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let doc = match run(&cli.command) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = if cli.json { doc.to_json() } else { doc.to_text() };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if doc.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
