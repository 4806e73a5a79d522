use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ringwalk::commands::{self, Command};
use ringwalk::config::{Format, Overrides, RunConfig};
use ringwalk::output;
use ringwalk::CliError;

#[derive(Parser)]
#[command(name = "ringwalk", version, about = "Add-or-multiply random walks on finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Units, similarity classes, principal left ideals and F_a sets
    Describe,
    /// Dense, block and (for M_2(F_q), q odd) closed-form spectra
    Spectrum,
    /// Exact stationary law by several routes
    Stationary,
    /// Total-variation curve d(t) and the mixing-time bound
    Mix,
    /// Seeded Monte Carlo trajectories
    Simulate,
    /// Every cross-check for the configured ring
    Verify,
}

#[derive(Args)]
struct Opts {
    /// TOML config file; flags override its values
    #[arg(long, global = true)]
    config: Option<String>,
    /// Ring, e.g. zn(6), matrix(q=3), upper_triangular(q=2), product(zn(2),zn(3))
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Heads probability as an exact rational p/q
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Accept alpha = 0 or 1
    #[arg(long, global = true)]
    boundary: bool,
    /// `uniform` or class masses `rep=p/q,...` (append `;normalize` to rescale)
    #[arg(long, global = true)]
    q: Option<String>,
    /// Eigenvalue matching tolerance
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Steps: horizon for mix and verify, trajectory length for simulate
    #[arg(long, global = true)]
    t: Option<usize>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Start state (element index) for simulate
    #[arg(long, global = true)]
    start: Option<usize>,
    /// left (x -> z x) or right (x -> x z)
    #[arg(long, global = true)]
    side: Option<String>,
    /// Worker threads for simulate; the output does not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// text or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<String>,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let o = cli.opts;
    let file = match &o.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{p}: {e}")))?),
        None => None,
    };
    let overrides = Overrides {
        ring: o.ring,
        alpha: o.alpha,
        boundary: o.boundary,
        q: o.q,
        tolerance: o.tolerance,
        t: o.t,
        epsilon: o.epsilon,
        samples: o.samples,
        seed: o.seed,
        start: o.start,
        side: o.side,
        threads: o.threads,
        format: o.format,
        output: o.output,
    };
    let cfg = RunConfig::resolve(file.as_deref(), &overrides)?;
    let cmd = match cli.command {
        Cmd::Describe => Command::Describe,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Stationary => Command::Stationary,
        Cmd::Mix => Command::Mix,
        Cmd::Simulate => Command::Simulate,
        Cmd::Verify => Command::Verify,
    };
    let report = commands::run(cmd, &cfg)?;
    let text = match cfg.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match &cfg.output {
        Some(p) => output::write_atomic(&output::resolve_path(p), &text)?,
        None => print!("{text}"),
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ringwalk: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("ringwalk: {e}");
            ExitCode::from(2)
        }
    }
}
