mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))?;
    }
    let mut out = commands::stdout();
    match &cli.command {
        Command::Sweep(a) => commands::cmd_sweep(a, &mut out),
        Command::Optimize(a) => commands::cmd_optimize(a, &mut out),
        Command::State(a) => commands::cmd_state(a, &mut out),
        Command::Mi(a) => commands::cmd_mi(a, &mut out),
        Command::Crossover(a) => commands::cmd_crossover(a, &mut out),
        Command::VerifyOracle(a) => commands::cmd_verify_oracle(a, &mut out),
    }?;
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}
