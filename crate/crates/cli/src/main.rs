//! `qsd`: sweep, angle-table, and verification harness for the
//! state-discrimination simulator.
//!
//! Exit codes: 0 on success, 1 on invariant or solver failure, 2 on bad
//! arguments.

use clap::{Args, Parser, Subcommand};

use qsd_cli::commands::{cmd_sweep, cmd_table, cmd_verify, CommandError};
use qsd_cli::config::{OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "qsd",
    about = "Optimal discrimination of three symmetric qubit states and its interferometric realization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep theta and emit probability curves, confidence curves, solved
    /// settings, and non-ideal envelopes.
    Sweep(SweepArgs),
    /// Solve the measurement waveplate angles per theta and compare them to
    /// the reference settings table.
    Table(SweepArgs),
    /// Run the invariant battery and report pass/fail per check.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// First theta of the grid, in degrees.
    #[arg(long, default_value_t = 0.0)]
    theta_start: f64,
    /// Last theta of the grid, in degrees.
    #[arg(long, default_value_t = 45.0)]
    theta_end: f64,
    /// Grid spacing, in degrees.
    #[arg(long, default_value_t = 5.0)]
    theta_step: f64,
    /// Strategy to evaluate (max_confidence, min_error); repeat or separate
    /// with commas. Both when omitted.
    #[arg(long = "strategy")]
    strategies: Vec<String>,
    /// Beamsplitter leak intensity for the non-ideal model.
    #[arg(long, default_value_t = 0.005)]
    leak: f64,
    /// Comma-separated leak phases in radians; twelve points over a full
    /// turn when omitted.
    #[arg(long)]
    leak_phase_grid: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output file path.
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Grid spacing over [0, 45] degrees.
    #[arg(long, default_value_t = 5.0)]
    theta_step: f64,
    /// Beamsplitter leak intensity for the non-ideal checks.
    #[arg(long, default_value_t = 0.005)]
    leak: f64,
    /// Negative control: corrupt the inconclusive-element scaling and show
    /// that validation rejects it (the run then fails by design).
    #[arg(long)]
    mutate: bool,
}

fn run_config(args: &SweepArgs) -> Result<RunConfig, CommandError> {
    RunConfig::validated(
        args.theta_start,
        args.theta_end,
        args.theta_step,
        &args.strategies,
        args.leak,
        args.leak_phase_grid.as_deref(),
        args.format,
        args.out.clone(),
    )
    .map_err(CommandError::Usage)
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(args) => run_config(args).and_then(|config| cmd_sweep(&config)),
        Command::Table(args) => run_config(args).and_then(|config| cmd_table(&config)),
        Command::Verify(args) => cmd_verify(args.theta_step, args.leak, args.mutate),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
