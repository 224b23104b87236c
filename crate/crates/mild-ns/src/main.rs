use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mild_ns::cli::{self, Command, Overrides};

/// Mild-solution laboratory for the Navier-Stokes integral equation on
/// periodic grids: Lorentz norms, kernel certification, Duhamel operators,
/// explicit constants, Picard solves and blowup-rate monitoring.
#[derive(Parser)]
#[command(name = "mild-ns", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// JSON run config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory override.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Escalate accuracy warnings to errors.
    #[arg(long)]
    strict: bool,
    /// Seed override for random initial data.
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            strict: if self.strict { Some(true) } else { None },
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the constants table (alpha, beta, gamma, delta, eta) as JSON.
    Constants {
        /// Space dimension (2 or 3).
        #[arg(long)]
        n: usize,
        /// Comma-separated subcritical exponents; "inf" allowed.
        #[arg(long, value_delimiter = ',')]
        r: Vec<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Lorentz quasinorms of the configured initial datum.
    Norms(ConfigArgs),
    /// Kernel certification: L1/L^{p,1} norms, decay constants, semigroup residuals.
    KernelCheck(ConfigArgs),
    /// Operator estimates on random divergence-free trajectories.
    EstimateCheck(ConfigArgs),
    /// Picard solve: norms.csv and summary.json.
    Solve(ConfigArgs),
    /// Solve plus Hoelder/continuity diagnostics.
    RegularityReport(ConfigArgs),
    /// Solve plus per-node blowup thresholds and lifespan bounds.
    BlowupReport(ConfigArgs),
    /// Render SVG plots from a norms.csv.
    Plot {
        /// Input CSV (as emitted by solve/blowup-report).
        csv: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_rs(tokens: &[String]) -> Result<Vec<f64>, String> {
    tokens
        .iter()
        .map(|token| {
            if token == "inf" {
                Ok(f64::INFINITY)
            } else {
                token
                    .parse::<f64>()
                    .map_err(|e| format!("invalid r {token:?}: {e}"))
            }
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Constants { n, r, out } => match parse_rs(&r) {
            Ok(rs) => Command::Constants { n, rs, out },
            Err(message) => {
                eprintln!("error: {message}");
                return ExitCode::from(2);
            }
        },
        Cmd::Norms(args) => Command::Norms {
            config: args.config.clone(),
            overrides: args.overrides(),
        },
        Cmd::KernelCheck(args) => Command::KernelCheck {
            config: args.config.clone(),
            overrides: args.overrides(),
        },
        Cmd::EstimateCheck(args) => Command::EstimateCheck {
            config: args.config.clone(),
            overrides: args.overrides(),
        },
        Cmd::Solve(args) => Command::Solve {
            config: args.config.clone(),
            overrides: args.overrides(),
        },
        Cmd::RegularityReport(args) => Command::RegularityReport {
            config: args.config.clone(),
            overrides: args.overrides(),
        },
        Cmd::BlowupReport(args) => Command::BlowupReport {
            config: args.config.clone(),
            overrides: args.overrides(),
        },
        Cmd::Plot { csv, out } => Command::Plot { csv, out },
    };
    ExitCode::from(cli::execute(command) as u8)
}
