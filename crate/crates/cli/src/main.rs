use std::process::ExitCode;

use clap::Parser;

mod commands;
mod opts;

fn main() -> ExitCode {
    let cli = opts::Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
