//! `facekit` — detect, enroll, recognize and score faces from the shell.
//!
//! Exit codes: 0 success, 2 bad flags, 3 unreadable or undecodable input,
//! 4 cascade model parse failure, 5 no face found while enrolling, 6 empty
//! gallery, 7 evaluation schema violation.

mod args;
mod commands;
mod error;
mod support;

use args::{Cli, Command, EvalCommand, GalleryCommand};
use clap::Parser;
use error::CliError;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {}", err.message);
        std::process::exit(err.code);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Detect(args) => commands::detect::run(args),
        Command::Enroll(args) => commands::enroll::run(args),
        Command::Recognize(args) => commands::recognize::run(args),
        Command::Eval(EvalCommand::Detect(args)) => commands::eval::run_detect(args),
        Command::Eval(EvalCommand::Recognize(args)) => commands::eval::run_recognize(args),
        Command::Gallery(GalleryCommand::List(args)) => commands::gallery::run_list(args),
    }
}
