use std::process::ExitCode;

use clap::Parser;

use sharptop_cli::args::Cli;
use sharptop_cli::config::RunConfig;
use sharptop_cli::error::{CliError, EXIT_INVALID};

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            std::process::exit(EXIT_INVALID);
        }
        Err(e) => {
            let _ = e.print();
            std::process::exit(0);
        }
    };
    let cfg = RunConfig::from_env(&cli.global.overrides())?;
    let r = sharptop_cli::execute(&cli.command, &cfg)?;
    sharptop_cli::emit(&r, &cfg)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.render());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
