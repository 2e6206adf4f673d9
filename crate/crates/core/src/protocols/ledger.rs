use serde::{Deserialize, Serialize};

use super::{PResult, ProtocolError};
use crate::entropy::EntropyReport;
use crate::hilbert::MultipartiteState;
use crate::scalar::Real;

/// Per-copy bookkeeping of catalytic α-bit merging: teleport with borrowed
/// ebits and α-bits, then return the entanglement the merge creates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalyticLedger {
    pub alpha: f64,
    pub h_a: f64,
    pub cond_ab: f64,
    pub mut_ar: f64,
    pub borrowed_ebits: f64,
    pub alpha_bits_consumed: f64,
    pub ebits_returned: f64,
    pub net_yield: f64,
    pub consumes_entanglement: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

/// Ledger from `H(A)` and `H(A|B)`, using `I(A:R) = H(A) + H(A|B)`.
pub fn catalytic_ledger_from(h_a: f64, cond_ab: f64, alpha: f64) -> PResult<CatalyticLedger> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ProtocolError::AlphaOutOfRange(alpha));
    }
    let mut_ar = h_a + cond_ab;
    let per = mut_ar / (1.0 + alpha);
    let net = h_a - per;
    let consumes = net < -1e-12;
    Ok(CatalyticLedger {
        alpha,
        h_a,
        cond_ab,
        mut_ar,
        borrowed_ebits: per,
        alpha_bits_consumed: per,
        ebits_returned: h_a,
        net_yield: net,
        consumes_entanglement: consumes,
        flag: consumes.then(|| format!("net entanglement consumed; needs alpha >= H(A|B)/H(A) = {:.6}", cond_ab / h_a)),
    })
}

pub fn catalytic_ledger<T: Real>(psi: &MultipartiteState<T>, alpha: f64) -> PResult<CatalyticLedger> {
    let rep = EntropyReport::from_state(psi)?;
    catalytic_ledger_from(rep.h_a, rep.cond_ab, alpha)
}

/// α-dits per copy used by the non-catalytic protocol, `I(A:R) / (2α)`.
pub fn noncatalytic_consumption(mut_ar: f64, alpha: f64) -> PResult<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ProtocolError::AlphaOutOfRange(alpha));
    }
    Ok(mut_ar / (2.0 * alpha))
}
