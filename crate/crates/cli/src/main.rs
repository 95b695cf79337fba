use std::process::ExitCode;

use clap::Parser;
use unitary_model_cli::io::to_pretty;
use unitary_model_cli::{run, Cli, CliError, RunConfig};

fn write(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors.
    let cli = Cli::parse();
    let outcome = RunConfig::try_from(&cli).and_then(|cfg| {
        let report = run(&cfg)?;
        if let (Some(path), Some(result)) = (&cli.artifact, &report.result) {
            write(path, &to_pretty(result))?;
        }
        match &cli.output {
            Some(path) => write(path, &report.to_json())?,
            None => print!("{}", report.to_json()),
        }
        Ok(report.exit_code())
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("umodel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
