//! `causal-product`: coefficient tables, kernel grids, identity checks and
//! convergence studies for causal double products of rotations.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{GlobalArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "causal-product", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// D/E coefficient tables from brute force and closed form.
    Coeffs,
    /// Lattice paths with their linear-extension counts.
    Paths,
    /// Residuals of the integral, integer and discrete identities.
    Verify {
        /// Perturb D(0,0,0;1) before evaluating the integer identity.
        #[arg(long, hide = true)]
        corrupt_d: bool,
    },
    /// Discrete-vs-continuum kernel error for a list of dimensions.
    Converge,
    /// Kernel of W - I on an interior grid.
    Kernel {
        /// Also evaluate the series truncated at this degree.
        #[arg(long)]
        series: Option<u32>,
    },
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = RunConfig::from_args(&cli.global)?;
    let report = match &cli.command {
        Command::Coeffs => commands::coeffs(&cfg)?,
        Command::Paths => commands::paths(&cfg)?,
        Command::Verify { corrupt_d } => commands::verify(&cfg, *corrupt_d)?,
        Command::Converge => commands::converge(&cfg)?,
        Command::Kernel { series } => commands::kernel(&cfg, *series)?,
    };
    output::emit(&cfg, &report.body)?;
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
