use clap::Parser;
use std::process::ExitCode;

use greenqtl_cli::Cli;

fn main() -> ExitCode {
    match Cli::parse().run() {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
