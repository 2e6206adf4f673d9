//! Executable merging protocols: Schumacher compression, the mother
//! protocol with a Haar scramble, the non-catalytic α-dit merge, the Uhlmann
//! decoder, and the catalytic resource ledger.

mod ledger;
mod merge;
mod schumacher;
mod uhlmann;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alpha_channel::ChannelError;
use crate::entropy::EntropyError;
use crate::hilbert::HilbertError;

pub use ledger::{catalytic_ledger, catalytic_ledger_from, noncatalytic_consumption, CatalyticLedger};
pub use merge::{mother_protocol_run, noncatalytic_merge, transmitted_qubits, MergeOptions};
pub use schumacher::{schumacher_project, TypicalProjection};
pub use uhlmann::{uhlmann_isometry, uhlmann_matrices, UhlmannResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(
        "α-dit capacity insufficient: need to send {needed} dimensions but the channel \
         decodes at most floor({d}^{alpha:.4}) = {k}"
    )]
    CapacityInsufficient { needed: usize, d: usize, alpha: f64, k: usize },
    #[error("channel input dimension {d_in} is not a multiple of |C| = {c}")]
    PaddingMismatch { d_in: usize, c: usize },
    #[error("cannot split {log_c} qubits off a {log_d}-qubit register")]
    SplitTooLarge { log_c: usize, log_d: usize },
    #[error("target system has dimension {y} but the reference marginal has rank {rank}")]
    TargetTooSmall { y: usize, rank: usize },
    #[error("reference systems differ: {0}")]
    ReferenceMismatch(String),
    #[error("protocol input must be a pure state")]
    NotPure,
    #[error("alpha must lie in (0, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("delta must be positive, got {0}")]
    BadDelta(f64),
    #[error("need at least one copy")]
    NoCopies,
}

pub(crate) type PResult<T> = Result<T, ProtocolError>;

/// Register sizes of one protocol run.
///
/// `A_S` is the typical subspace embedded into `2^m` dimensions; it splits as
/// `C ⊗ A'` with `C` most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProtocolPartition {
    pub a_s: usize,
    pub a_prime: usize,
    pub c: usize,
    pub c_prime: usize,
    pub b: usize,
    pub r: usize,
    pub e: usize,
    pub e_prime: usize,
}

impl ProtocolPartition {
    pub fn log_c(&self) -> usize {
        self.c.trailing_zeros() as usize
    }

    /// `log|C| + log|A'| = log|A_S|`.
    pub fn split_conserved(&self) -> bool {
        self.c * self.a_prime == self.a_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProtocolReport {
    pub protocol: String,
    pub copies: usize,
    pub seed: u64,
    pub partition: ProtocolPartition,
    /// Dimension and retained weight of the typical projection.
    pub typical_dim: usize,
    pub typical_weight: f64,
    /// Trace distance of the reference-side marginal from its ideal product.
    pub decoupling_deficit: f64,
    /// Squared overlap of the final state with the ideal merged state.
    pub merge_fidelity: f64,
    pub ebit_yield: f64,
    pub alpha_dits_consumed: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decode_fidelity: Option<f64>,
    /// `<Φ|ρ_EE'|Φ>` for the environment side product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_product_fidelity: Option<f64>,
    pub wall_clock: f64,
}

const CSV_COLUMNS: &[&str] = &[
    "protocol",
    "copies",
    "seed",
    "logC",
    "aPrime",
    "cPrime",
    "e",
    "typicalDim",
    "typicalWeight",
    "decouplingDeficit",
    "mergeFidelity",
    "ebitYield",
    "alphaDitsConsumed",
    "decodeFidelity",
    "sideProductFidelity",
    "wallClock",
];

impl ProtocolReport {
    pub fn csv_header() -> String {
        CSV_COLUMNS.join(",")
    }

    /// One CSV row in [`csv_header`](Self::csv_header) order; absent
    /// optional fields are empty.
    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
        [
            self.protocol.clone(),
            self.copies.to_string(),
            self.seed.to_string(),
            self.partition.log_c().to_string(),
            self.partition.a_prime.to_string(),
            self.partition.c_prime.to_string(),
            self.partition.e.to_string(),
            self.typical_dim.to_string(),
            self.typical_weight.to_string(),
            self.decoupling_deficit.to_string(),
            self.merge_fidelity.to_string(),
            self.ebit_yield.to_string(),
            self.alpha_dits_consumed.to_string(),
            opt(self.decode_fidelity),
            opt(self.side_product_fidelity),
            self.wall_clock.to_string(),
        ]
        .join(",")
    }
}
