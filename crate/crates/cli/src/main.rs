mod args;
mod config;
mod output;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .into_config()
        .map_err(Failure::Config)
        .and_then(run::execute);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
