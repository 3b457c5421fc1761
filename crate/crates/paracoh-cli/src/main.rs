//! Command-line workflows for coherence-based machine-translation detection.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::UsageError;
use config::{CommonArgs, RunConfig};

#[derive(Parser)]
#[command(
    name = "paracoh",
    about = "Detect machine-translated paragraphs from cross-sentence lexical coherence",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the averaged-perceptron tagger from a tagged corpus.
    BuildTagger(CommonArgs),
    /// Compute coherence feature vectors for a paragraph corpus.
    Extract(CommonArgs),
    /// Train a linear classifier on a labeled feature matrix.
    Train(CommonArgs),
    /// Cross-validate a labeled feature matrix and rank tag pairs.
    Evaluate(CommonArgs),
    /// Rank tag pairs by their standalone cross-validation accuracy.
    RankPairs(CommonArgs),
    /// Score an unlabeled corpus with a trained model.
    Detect(CommonArgs),
    /// Evaluate a frequency-distribution baseline on a labeled corpus.
    Baseline(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::BuildTagger(_) => "build-tagger",
            Command::Extract(_) => "extract",
            Command::Train(_) => "train",
            Command::Evaluate(_) => "evaluate",
            Command::RankPairs(_) => "rank-pairs",
            Command::Detect(_) => "detect",
            Command::Baseline(_) => "baseline",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::BuildTagger(a)
            | Command::Extract(a)
            | Command::Train(a)
            | Command::Evaluate(a)
            | Command::RankPairs(a)
            | Command::Detect(a)
            | Command::Baseline(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let config = match RunConfig::resolve(cli.command.args()) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match commands::run(command, &config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
