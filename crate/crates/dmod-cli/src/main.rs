use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use dmod_cli::{execute, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DMOD_LOG")).format_timestamp(None).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.doc.to_json());
            } else {
                print!("{}", out.doc.to_text());
            }
            if out.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &out.failures {
                    eprintln!("verify: {f}");
                }
                ExitCode::from(5)
            }
        }
        Err(e) => {
            eprintln!("dmod: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
