use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nmteleport::config::{RawConfig, RunConfig};
use nmteleport::{RunError, EXIT_IO};

/// Teleportation fidelity, Hilbert–Schmidt speed and non-Markovianity under
/// non-Markovian amplitude damping.
#[derive(Parser)]
#[command(name = "nmteleport", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario or a sweep and write its time series.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// bare, wm_qmr or eam_qmr
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long = "gamma0-over-lambda")]
    gamma0_over_lambda: Option<String>,
    /// Polar angle of the input state (radians).
    #[arg(long)]
    theta: Option<String>,
    /// Phase of the input state (radians).
    #[arg(long)]
    phi: Option<String>,
    /// Weak-measurement strength.
    #[arg(long)]
    p: Option<String>,
    /// Reversal strength after weak measurement.
    #[arg(long)]
    q: Option<String>,
    /// Reversal strength after environment-assisted post-selection.
    #[arg(long = "q-prime")]
    q_prime: Option<String>,
    /// Final time in units of 1/λ.
    #[arg(long = "t-max")]
    t_max: Option<String>,
    /// Time step in units of 1/λ.
    #[arg(long)]
    dt: Option<String>,
    /// Sweep axis: gamma0_over_lambda, p, q, q_prime, theta or phi.
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated sweep values.
    #[arg(long)]
    values: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    /// csv or jsonl
    #[arg(long)]
    format: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, RunError> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                RawConfig::parse(&text)?
            }
            None => RawConfig::default(),
        };
        let flags = [
            ("scenario", &self.scenario),
            ("gamma0_over_lambda", &self.gamma0_over_lambda),
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("p", &self.p),
            ("q", &self.q),
            ("q_prime", &self.q_prime),
            ("t_max", &self.t_max),
            ("dt", &self.dt),
            ("sweep_axis", &self.sweep),
            ("sweep_values", &self.values),
            ("output_path", &self.out),
            ("format", &self.format),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set_flag(key, v.as_str())?;
            }
        }
        Ok(raw.resolve()?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    let result = args.resolve().and_then(|cfg| nmteleport::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nmteleport: {e}");
            let code = e.exit_code();
            debug_assert!(code == 2 || code == EXIT_IO);
            ExitCode::from(code as u8)
        }
    }
}
