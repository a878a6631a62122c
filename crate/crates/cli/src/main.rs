//! `tsgraph`: Type Size coding of unlabeled graph structures, plus the
//! counting, rate and validation tools around it.

mod commands;
mod config;
mod error;
mod plot;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CountArgs, DecodeArgs, EncodeArgs, PlotArgs, RateArgs, VerifyArgs};
use config::Config;

#[derive(Debug, Parser)]
#[command(name = "tsgraph", version, about = "Type Size coding of unlabeled Erdős–Rényi graph structures")]
struct Cli {
    #[command(flatten)]
    config: Config,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode graph6 graphs as codeword records.
    Encode(EncodeArgs),
    /// Decode codeword records to canonical graph6 representatives.
    Decode(DecodeArgs),
    /// Exact structure counts, the Wright approximation, or class-size bounds.
    Count(CountArgs),
    /// ε-coding rates and the second-order rate bound.
    Rate(RateArgs),
    /// Run validation suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Render a JSON report as an SVG line chart.
    Plot(PlotArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.config.validate().and_then(|()| match &cli.command {
        Command::Encode(args) => commands::encode(args, &cli.config),
        Command::Decode(args) => commands::decode(args, &cli.config),
        Command::Count(args) => commands::count(args, &cli.config),
        Command::Rate(args) => commands::rate(args, &cli.config),
        Command::Verify(args) => commands::verify(args, &cli.config),
        Command::Plot(args) => commands::plot(args),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tsgraph: {e}");
            e.exit_code()
        }
    }
}
