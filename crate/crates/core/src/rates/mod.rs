//! Closed-form merging rates, `K_alpha` membership, the two-panel sweep and
//! single-copy ledgers.

mod oneshot;
mod sweep;

use serde::Serialize;
use thiserror::Error;

use crate::entropy::EntropyReport;

pub use oneshot::{one_shot_ledgers, CatalyticOneShot, NonCatalyticOneShot, OneShotLedger};
pub use sweep::{sweep_rates, GridSpec, Panel, RatePoint};

/// Slack for boundary comparisons such as `H(A|B) <= alpha H(A)`.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("alpha = {0} outside (0, 1]")]
    AlphaOutOfRange(f64),
    #[error(
        "non-catalytic rate I(A:R)/(2 alpha) diverges at alpha = 0 (I(A:R) = {mut_ar}); \
         zero-bits alone cannot merge without catalytic entanglement"
    )]
    ZeroBitDivergence { mut_ar: f64 },
    #[error("inconsistent one-shot entropies: H_max(A) = {h_max} < H_min(A|R) = {h_min_cond}")]
    InconsistentEntropies { h_max: f64, h_min_cond: f64 },
    #[error("entropies must be finite with H(A) >= 0 and |H(A|B)| <= H(A), got H(A) = {h_a}, H(A|B) = {cond}")]
    BadEntropies { h_a: f64, cond: f64 },
    #[error("grid needs at least 2 points, got {0}")]
    BadGrid(usize),
    #[error("exact ledger route failed: {0}")]
    Exact(String),
}

/// Entropies of a pure `psi_ABR`, reduced to `H(A)` and `H(A|B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureEntropies {
    #[serde(rename = "hA")]
    pub h_a: f64,
    #[serde(rename = "hAB")]
    pub cond_ab: f64,
}

impl PureEntropies {
    pub fn new(h_a: f64, cond_ab: f64) -> Result<Self, RateError> {
        let ok = h_a.is_finite() && cond_ab.is_finite() && h_a >= 0.0 && cond_ab.abs() <= h_a + BOUNDARY_TOL;
        if !ok {
            return Err(RateError::BadEntropies { h_a, cond: cond_ab });
        }
        Ok(PureEntropies { h_a, cond_ab })
    }

    pub fn from_report(r: &EntropyReport) -> Result<Self, RateError> {
        Self::new(r.h_a, r.cond_ab)
    }

    /// `I(A:R) = H(A) + H(A|B)` for pure states.
    pub fn mut_ar(&self) -> f64 {
        self.h_a + self.cond_ab
    }

    /// `I(A:B) = H(A) - H(A|B)` for pure states.
    pub fn mut_ab(&self) -> f64 {
        self.h_a - self.cond_ab
    }

    /// `H(A|B)/H(A)`, taken as 0 for a product `A`.
    pub fn ratio(&self) -> f64 {
        if self.h_a == 0.0 {
            0.0
        } else {
            self.cond_ab / self.h_a
        }
    }
}

/// A rate in bits per copy together with the net ebits it yields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Rate {
    pub value: f64,
    pub ebit_yield: f64,
    pub valid: bool,
    pub reason: Option<&'static str>,
}

fn check_alpha(alpha: f64) -> Result<(), RateError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(RateError::AlphaOutOfRange(alpha))
    }
}

/// Catalytic rate `I(A:R)/(1+alpha)`, yield `H(A) - rate`; valid iff the
/// yield is non-negative, i.e. `alpha >= H(A|B)/H(A)`.
pub fn catalytic_rate(e: &PureEntropies, alpha: f64) -> Result<Rate, RateError> {
    check_alpha(alpha)?;
    let value = e.mut_ar() / (1.0 + alpha);
    let ebit_yield = e.h_a - value;
    let valid = ebit_yield >= -BOUNDARY_TOL;
    Ok(Rate { value, ebit_yield, valid, reason: (!valid).then_some("net ebit consumption") })
}

/// Non-catalytic rate `I(A:R)/(2 alpha)` with yield `I(A:B)/2`.
pub fn noncatalytic_rate(e: &PureEntropies, alpha: f64) -> Result<Rate, RateError> {
    if alpha == 0.0 {
        return Err(RateError::ZeroBitDivergence { mut_ar: e.mut_ar() });
    }
    check_alpha(alpha)?;
    Ok(Rate { value: e.mut_ar() / (2.0 * alpha), ebit_yield: e.mut_ab() / 2.0, valid: true, reason: None })
}

/// `H(A|B) <= alpha H(A)`.
pub fn in_k_alpha(e: &PureEntropies, alpha: f64) -> bool {
    e.cond_ab <= alpha * e.h_a + BOUNDARY_TOL
}

/// Rate `H(A)` of merging through the channel built for `alpha`; only
/// guaranteed to decouple inside `K_alpha`.
pub fn n_alpha_rate(e: &PureEntropies, alpha: f64) -> Rate {
    let mut r = Rate { value: e.h_a, ebit_yield: 0.0, valid: true, reason: None };
    if !(alpha > 0.0 && alpha <= 1.0) {
        r.valid = false;
        r.reason = Some("alpha outside (0, 1]");
    } else if !in_k_alpha(e, alpha) {
        r.valid = false;
        r.reason = Some("decoupling not guaranteed outside K_alpha");
    }
    r
}
