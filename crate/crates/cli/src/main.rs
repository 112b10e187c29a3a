mod args;
mod commands;
mod settings;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use settings::UsageError;

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Graph(c) => commands::graph(c),
        Command::Word(c) => commands::word(c),
        Command::Ball(a) => commands::ball_cmd(a),
        Command::Div(c) => commands::div(c),
        Command::Fit(a) => commands::fit(a),
        Command::Experiment(a) => commands::experiment(a),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}\n\nRun with --help for usage.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
