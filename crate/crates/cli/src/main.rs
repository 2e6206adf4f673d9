//! `alphamerge` command-line harness.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage, 3 capacity or
//! other precondition, 4 numerical non-convergence.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "alphamerge", version, about = "Alpha-bit state merging simulator and resource checker")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Master seed; channel isometries use child stream 1, protocol scrambles the seed itself.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Slack applied to `--expect` thresholds.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Sampled subspaces for `duality`.
    #[arg(long, global = true, default_value_t = 20)]
    pub samples: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Mother,
    Noncat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropies of a tripartite pure state (JSON by default).
    Entropy {
        /// bell-ab, bell-ar, ghz, w, product, partial, random(dA,dB,dR,seed) or file:PATH
        #[arg(long)]
        state: String,
        /// Smoothing parameter for the one-shot entropies.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Run one merging protocol and print its report (JSON by default).
    MergeSim {
        #[arg(long, value_enum)]
        protocol: Protocol,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Qubits sent by the mother protocol; defaults to ceil(n I(A:R)/2) + margin.
        #[arg(long = "logC")]
        log_c: Option<usize>,
        /// nalpha:dA,dB,dE
        #[arg(long)]
        channel: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        margin: usize,
        /// Exit 1 unless mergeFidelity >= this value.
        #[arg(long)]
        expect: Option<f64>,
        /// Keep the measured wall clock in the report (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Closed-form rate curves (CSV by default).
    Sweep {
        #[arg(long)]
        panel: alphamerge::rates::Panel,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// H(A) used for the raw columns.
        #[arg(long = "h-a", default_value_t = 1.0)]
        h_a: f64,
    },
    /// Decode sampled subspaces and check the decoding/forgetfulness duality (CSV by default).
    Duality {
        /// nalpha:dA,dB,dE
        #[arg(long)]
        channel: String,
        #[arg(long)]
        k: usize,
    },
    /// Verify derivation scripts; exit 0 iff every check behaves as declared.
    Derive {
        #[arg(required = true)]
        scripts: Vec<PathBuf>,
    },
    /// Single-copy resource ledgers (JSON by default).
    OneshotLedger {
        #[arg(long)]
        state: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let g = cli.global;
    let result = match cli.command {
        Command::Entropy { state, eps, copies } => commands::entropy(&g, &state, eps, copies),
        Command::MergeSim { protocol, state, n, log_c, channel, delta, margin, expect, timing } => {
            commands::merge_sim(&g, commands::MergeArgs { protocol, state, n, log_c, channel, delta, margin, expect, timing })
        }
        Command::Sweep { panel, points, h_a } => commands::sweep(&g, panel, points, h_a),
        Command::Duality { channel, k } => commands::duality(&g, &channel, k),
        Command::Derive { scripts } => commands::derive(&g, &scripts),
        Command::OneshotLedger { state, alpha, eps, copies } => commands::oneshot_ledger(&g, &state, alpha, eps, copies),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
