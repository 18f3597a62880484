use std::process::ExitCode;

use clap::Parser;
use hyperwave::cli::Cli;
use hyperwave::commands::{common, run};
use hyperwave::config::expand_config;
use hyperwave::error::{CliError, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE};

fn main() -> ExitCode {
    let args = match expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_PASS as u8 });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::from(EXIT_PASS as u8),
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED as u8),
        Err(e) => fail(&e),
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let out = run(&cli.command)?;
    println!("{}", out.record.to_json()?);
    if let (Some(path), Some(table)) = (&common(&cli.command).out, &out.table) {
        table.write_path(path)?;
    }
    Ok(out.passed)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
