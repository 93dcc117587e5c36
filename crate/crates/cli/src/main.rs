mod args;
mod commands;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Approx(a) => commands::approx(a),
        Command::Study(a) => commands::study(a),
        Command::Sector(a) => commands::sector(a),
        Command::Matrix(a) => commands::matrix(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("comprat: {e}");
            e.exit_code()
        }
    }
}
