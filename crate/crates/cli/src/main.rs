//! `uncertainty`: border datasets, samples, inequality checks and figures.
//!
//! Exit codes: 0 success, 1 suite failure, 2 usage error, 3 solver
//! non-convergence.

mod commands;
mod config;
mod dataset;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Failure, Outcome, EXIT_USAGE};
use config::{Format, Grid, RunConfig};

#[derive(Parser)]
#[command(
    name = "uncertainty",
    version,
    about = "Uncertainty regions of pairs of quantum observables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the lower convex-hull border over a log-spaced grid of α/β.
    Border(Common),
    /// Measure pairs for seeded random states.
    Sample(Common),
    /// Sweep an inequality over random states, or check the von Mises ratio.
    Check {
        /// robertson, schrodinger, correlation, mp1, mp2, mp3, a15 or vonmises-ratio.
        #[arg(long)]
        inequality: String,
        #[command(flatten)]
        common: Common,
    },
    /// Write one of the figures 1a, 1b, 2, 3, 4, 5, 7 as SVG.
    Figure {
        id: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// pauli, spin1, weyl:N, qutrit, rotor[:Λ] or oscillator[:n].
    #[arg(long, default_value = "pauli")]
    model: String,
    /// variance, ssd or mtc; defaults to the model's natural measure.
    #[arg(long)]
    measure: Option<String>,
    /// Log-spaced ratios α/β as N:TMIN:TMAX.
    #[arg(long, default_value_t = Grid::default())]
    grid: Grid,
    /// Number of random states [default: 10000 for check, 2000 otherwise].
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Cutoff of truncated models [default: 64 for the rotor, 200 for the oscillator].
    #[arg(long)]
    trunc: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Common {
    fn config(&self, command: &str, default_count: usize) -> Result<RunConfig, Failure> {
        let (model, measure) = RunConfig::resolve(&self.model, self.measure.as_deref(), self.trunc)?;
        Ok(RunConfig {
            command: command.into(),
            model,
            measure,
            grid: self.grid,
            count: self.count.unwrap_or(default_count),
            seed: self.seed,
            format: self.format,
            out: self.out.clone(),
        })
    }
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), Failure> {
    Ok(match cli.command {
        Command::Border(common) => {
            let config = common.config("border", 2000)?;
            (commands::border(&config)?, config.out)
        }
        Command::Sample(common) => {
            let config = common.config("sample", 2000)?;
            (commands::sample(&config)?, config.out)
        }
        Command::Check { inequality, common } => {
            let config = common.config("check", 10_000)?;
            (commands::check(&inequality, &config)?, config.out)
        }
        Command::Figure { id, common } => {
            let mut config = common.config("figure", 2000)?;
            config.format = Format::Svg;
            (commands::figure(&id, &config, common.trunc)?, config.out)
        }
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, out)) => match emit(&outcome.text, out.as_ref()) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(EXIT_USAGE)
            }
        },
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
