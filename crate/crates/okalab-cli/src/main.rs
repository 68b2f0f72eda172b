mod cli;
mod config;
mod output;
mod parse;
mod sweep;

use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let parsed = match cli::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli::dispatch(parsed) {
        Ok(out) => {
            println!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
