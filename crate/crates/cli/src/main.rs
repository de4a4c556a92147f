use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hkoebe_cli::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = cli.write(&out.body) {
                eprintln!("hkoebe: {e}");
                return ExitCode::from(hkoebe_cli::exit::ERROR as u8);
            }
            let _ = std::io::stdout().flush();
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("hkoebe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
