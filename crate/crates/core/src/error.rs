use thiserror::Error;

use crate::alpha_channel::ChannelError;
use crate::calculus::CalculusError;
use crate::entropy::EntropyError;
use crate::hilbert::HilbertError;
use crate::protocols::ProtocolError;
use crate::rates::RateError;

/// Crate-level error; each variant carries the failing module's tag.
#[derive(Debug, Error)]
pub enum Error {
    #[error("[hilbert-core] {0}")]
    Hilbert(#[from] HilbertError),
    #[error("[entropy-suite] {0}")]
    Entropy(#[from] EntropyError),
    #[error("[alpha-channel] {0}")]
    Channel(#[from] ChannelError),
    #[error("[merging-protocols] {0}")]
    Protocol(#[from] ProtocolError),
    #[error("[resource-calculus] {0}")]
    Calculus(#[from] CalculusError),
    #[error("[rates] {0}")]
    Rate(#[from] RateError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
