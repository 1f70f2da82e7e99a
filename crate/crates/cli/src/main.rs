mod args;
mod commands;
mod error;
mod manifest;

use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match &cli.command {
        Command::ExactSum(a) => commands::exact_sum(a, &mut out),
        Command::Iterate(a) => commands::iterate(a, &mut out),
        Command::Sample(a) => commands::sample(a, &mut out),
        Command::ReturnTime(a) => commands::return_time(a, &mut out),
        Command::Estimate(a) => commands::estimate(a, &mut out),
        Command::Sweep(a) => commands::sweep(a, &mut out),
        Command::Haar(a) => commands::haar(a, &mut out),
    };
    let flushed = out.flush();
    match result.and_then(|()| flushed.map_err(Into::into)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
