use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use itercur_bench::cli::Cli;
use itercur_bench::Result;

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn try_main() -> Result<()> {
    let cfg = Cli::parse().into_config()?;
    let table = itercur_bench::run(&cfg)?;
    match &cfg.out {
        Some(path) => table.write_path(path)?,
        None => table.write_to(std::io::stdout().lock())?,
    }
    let mut err = std::io::stderr().lock();
    writeln!(err, "{}", table.summary())?;
    Ok(())
}
