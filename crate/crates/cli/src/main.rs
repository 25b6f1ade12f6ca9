//! Command-line figure pipeline for the two-qubit thermal machine.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "thermal-ep", version, about = "Liouvillian exceptional points of a two-qubit thermal machine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic and numeric spectra plus rates and EP flags.
    Spectrum(Args),
    /// EP solutions along one parameter and EP locus curves.
    EpFind(Args),
    /// Trajectories and observables.
    Evolve(Args),
    /// Critical-damping ratio R(t).
    Ratio(Args),
    /// Harmonic-oscillator ratio R_HO(t).
    Ho(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override a configuration key, as key=value (repeatable).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Also print the canonical configuration to standard output.
    #[arg(long, value_enum, default_value_t = Echo::Off)]
    echo_config: Echo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Echo {
    Off,
    On,
}

type Runner = fn(&RunConfig) -> Result<output::Outputs, CliError>;

fn execute(cli: Cli) -> Result<(), CliError> {
    let (args, run): (&Args, Runner) = match &cli.command {
        Command::Spectrum(a) => (a, commands::spectrum::run),
        Command::EpFind(a) => (a, commands::ep_find::run),
        Command::Evolve(a) => (a, commands::evolve::run),
        Command::Ratio(a) => (a, commands::ratio::run),
        Command::Ho(a) => (a, commands::ho::run),
    };
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text, &args.overrides)?;
    if args.echo_config == Echo::On {
        print!("{}", cfg.to_canonical());
    }
    let outputs = run(&cfg)?;
    outputs.write_all(&args.out)?;
    log::info!("wrote {} to {}", outputs.names().join(", "), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e)
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion =>
        {
            e.exit()
        }
        Err(e) => {
            let err = CliError::Config(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
