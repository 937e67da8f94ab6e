use clap::Parser;
use exactsum_cli::app::{run, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("exactsum: {e}");
            ExitCode::FAILURE
        }
    }
}
