use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polent_cli::commands::sweep_grid;
use polent_cli::{
    cmd_distill_region, cmd_optimize, cmd_plasmon, cmd_smax_sweep, cmd_transfer, CliError,
    CliResult, RegionArgs, Scenario,
};

/// Entanglement transfer of photon pairs through linear media.
#[derive(Parser)]
#[command(name = "polent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for randomized searches.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a pair through two media and report the result.
    Transfer(#[command(flatten)] Common),
    /// Tabulate the best CHSH value against τ₁/τ₂.
    SmaxSweep {
        #[command(flatten)]
        common: Common,
        /// Number of grid points.
        #[arg(long, value_name = "N")]
        steps: Option<usize>,
    },
    /// Tabulate the distillation region in (ln τ₁, ln τ₂).
    DistillRegion {
        #[command(flatten)]
        common: Common,
        /// Points per axis and per boundary edge.
        #[arg(long, value_name = "N")]
        steps: Option<usize>,
        /// Concurrence of the incident pair.
        #[arg(long, value_name = "X")]
        pin: Option<f64>,
        /// Upper end of both ln τ axes.
        #[arg(long, value_name = "X")]
        ln_tau_max: Option<f64>,
    },
    /// Report resonances and symmetry ratios of a plasmonic film pair.
    Plasmon(#[command(flatten)] Common),
    /// Search incident polarizations for the largest transmitted concurrence.
    Optimize(#[command(flatten)] Common),
}

fn load(path: &Option<PathBuf>) -> CliResult<Option<Scenario>> {
    path.as_deref().map(Scenario::load).transpose()
}

fn require(path: &Option<PathBuf>) -> CliResult<Scenario> {
    load(path)?.ok_or_else(|| CliError::Config("--config is required for this command".into()))
}

fn run(cli: Cli) -> CliResult<()> {
    let (text, out) = match cli.command {
        Command::Transfer(c) => (cmd_transfer(&require(&c.config)?)?, c.out),
        Command::SmaxSweep { common, steps } => {
            let scenario = load(&common.config)?;
            let grid = sweep_grid(scenario.as_ref(), steps)?;
            (cmd_smax_sweep(&grid)?, common.out)
        }
        Command::DistillRegion {
            common,
            steps,
            pin,
            ln_tau_max,
        } => {
            let scenario = load(&common.config)?;
            let args = RegionArgs::resolve(scenario.as_ref(), pin, ln_tau_max, steps);
            (cmd_distill_region(&args)?, common.out)
        }
        Command::Plasmon(c) => (cmd_plasmon(&require(&c.config)?)?, c.out),
        Command::Optimize(c) => (cmd_optimize(&require(&c.config)?, c.seed)?, c.out),
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polent: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
