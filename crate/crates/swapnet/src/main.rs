use std::process::ExitCode;

use clap::Parser;

use swapnet::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swapnet: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
