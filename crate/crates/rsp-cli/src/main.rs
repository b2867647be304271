//! `rsp` — command-line front end for the remote-state-preparation
//! simulator.
//!
//! Every command exits 0 on success and prints a single machine-parsable
//! `error: <detail>` line on failure. With `--out <path>` the main result is
//! written to `<path>` and sweeps/qpt add a `<path>.summary` companion;
//! without it everything goes to stdout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rsp_cli::experiments::{
    chsh_experiment, classical_baseline_experiment, favg_limit, qpt_channel, sweep_mixture,
    sweep_phi1, sweep_phi2, CommonConfig, Mode, QptRun, ScalarRun, SweepRun,
};
use rsp_cli::parse_resource_spec;
use rsp_core::process::ChshAngles;
use rsp_core::protocol::OutcomeLabel;

#[derive(Parser)]
#[command(
    name = "rsp",
    version,
    about = "Simulator of remote qubit preparation through a photonic teleportation channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the preparation phase Δφ₁ over a full cycle (Z–X plane).
    SweepPhi1(SweepArgs),
    /// Sweep the output phase Δφ₂ over a full cycle (equatorial plane).
    SweepPhi2(SweepArgs),
    /// Step the arm mismatch in full cycles to scan the degree of mixture.
    SweepMixture(SweepArgs),
    /// Process tomography of one teleportation outcome.
    Qpt(QptArgs),
    /// CHSH estimator of the entangled resource.
    Chsh(ChshArgs),
    /// Mean teleportation fidelity ceiling set by the resource.
    FavgLimit(FavgArgs),
    /// Classical measure-and-resend fidelity baseline.
    ClassicalBaseline(BaselineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Analytic probabilities and states.
    Exact,
    /// Poisson coincidence counting and tomographic reconstruction.
    Counts,
}

#[derive(Args)]
struct CommonArgs {
    /// Entangled resource: ideal | werner:<p> | rotated:<ax,ay,az;bx,by,bz> | file:<path>
    #[arg(long, default_value = "ideal")]
    resource: String,
    /// Beamsplitter intensity transmittance T (R = 1 - T)
    #[arg(long = "bs-t", default_value_t = 0.5)]
    bs_t: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Coincidence rate in s^-1 (counting mode)
    #[arg(long, default_value_t = 600.0)]
    rate: f64,
    /// Accumulation time per setting in seconds (counting mode)
    #[arg(long, default_value_t = 10.0)]
    duration: f64,
    /// Seed for every random draw of the run
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of grid points (sweeps)
    #[arg(long, default_value_t = 24)]
    grid: usize,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn config(&self) -> Result<CommonConfig> {
        Ok(CommonConfig {
            resource: parse_resource_spec(&self.resource)?,
            bs_transmittance: self.bs_t,
            mode: match self.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Counts => Mode::Counts,
            },
            rate: self.rate,
            duration: self.duration,
            seed: self.seed,
            grid: self.grid,
        })
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct QptArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Teleportation outcome to characterize: 0H, 0V, 1H or 1V
    #[arg(long, default_value = "0H")]
    label: String,
}

#[derive(Args)]
struct ChshArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Analyzer angles a,a',b,b' in degrees
    #[arg(long, default_value = "0,45,-22.5,-67.5")]
    angles: String,
}

#[derive(Args)]
struct FavgArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Pure input states to average over (>= 10000)
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Measure-and-resend rounds (>= 10000)
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

fn parse_angles(spec: &str) -> Result<ChshAngles> {
    let parts: Vec<f64> = spec
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .context("angles must be numbers")?;
    let [a, a_prime, b, b_prime]: [f64; 4] = parts
        .try_into()
        .map_err(|_| anyhow!("--angles needs exactly 4 comma-separated degrees"))?;
    Ok(ChshAngles {
        a: a.to_radians(),
        a_prime: a_prime.to_radians(),
        b: b.to_radians(),
        b_prime: b_prime.to_radians(),
    })
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".summary");
    path.with_file_name(name)
}

fn emit_sweep(run: &SweepRun, out: &Option<PathBuf>) -> Result<()> {
    write_or_print(out, &run.results.emit())?;
    match out {
        Some(path) => std::fs::write(summary_path(path), run.summary.emit())
            .context("cannot write summary"),
        None => {
            print!("{}", run.summary.emit());
            Ok(())
        }
    }
}

fn emit_qpt(run: &QptRun, out: &Option<PathBuf>) -> Result<()> {
    write_or_print(out, &run.results.emit())?;
    match out {
        Some(path) => std::fs::write(summary_path(path), run.summary.emit())
            .context("cannot write summary"),
        None => {
            print!("{}", run.summary.emit());
            Ok(())
        }
    }
}

fn emit_scalar(run: &ScalarRun, out: &Option<PathBuf>) -> Result<()> {
    write_or_print(out, &run.summary.emit())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SweepPhi1(args) => {
            let run = sweep_phi1(&args.common.config()?)?;
            emit_sweep(&run, &args.common.out)
        }
        Command::SweepPhi2(args) => {
            let run = sweep_phi2(&args.common.config()?)?;
            emit_sweep(&run, &args.common.out)
        }
        Command::SweepMixture(args) => {
            let run = sweep_mixture(&args.common.config()?)?;
            emit_sweep(&run, &args.common.out)
        }
        Command::Qpt(args) => {
            let label = OutcomeLabel::parse(&args.label).map_err(|e| anyhow!("{e}"))?;
            let run = qpt_channel(&args.common.config()?, label)?;
            emit_qpt(&run, &args.common.out)
        }
        Command::Chsh(args) => {
            let angles = parse_angles(&args.angles)?;
            let run = chsh_experiment(&args.common.config()?, &angles)?;
            emit_scalar(&run, &args.common.out)
        }
        Command::FavgLimit(args) => {
            let run = favg_limit(&args.common.config()?, args.samples)?;
            emit_scalar(&run, &args.common.out)
        }
        Command::ClassicalBaseline(args) => {
            let run = classical_baseline_experiment(&args.common.config()?, args.samples)?;
            emit_scalar(&run, &args.common.out)
        }
    }
}

fn main() -> ExitCode {
    use clap::error::ErrorKind;
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            e.exit()
        }
        Err(e) => {
            // Flatten usage errors to the single-line contract.
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim();
            eprintln!("error: {}", first.strip_prefix("error: ").unwrap_or(first));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
