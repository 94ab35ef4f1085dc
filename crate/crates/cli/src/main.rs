use std::process::ExitCode;

use clap::Parser;
use gtorsion_cli::{render, run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let mut code = outcome.code;
    if let Some(report) = &outcome.report {
        let text = render(report);
        match &cli.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: writing {}: {e}", path.display());
                    code = EXIT_INPUT;
                }
            }
            None => print!("{text}"),
        }
    }
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    ExitCode::from(code as u8)
}
