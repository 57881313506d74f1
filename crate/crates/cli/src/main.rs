use std::process::ExitCode;

use clap::Parser;
use signalscope_cli::{run, Cli, RunConfig, EXIT_ERROR};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| {
        let out = run(&config)?;
        match &config.output {
            Some(path) => std::fs::write(path, &out.document)?,
            None => print!("{}", out.document),
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("signalscope: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
