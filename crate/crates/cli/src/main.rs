use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

fn main() -> ExitCode {
    let cli = blochop_cli::Cli::parse();
    let start = Instant::now();
    let out = blochop_cli::run(&cli);
    // timing stays out of the report so reports are byte-reproducible
    eprintln!("{}: {:.3}s", cli.command.name(), start.elapsed().as_secs_f64());
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
