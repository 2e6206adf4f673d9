use num_traits::ToPrimitive;
use serde::Serialize;

use super::RateError;
use crate::calculus::{self, Bindings, Mode, RatFn, Step, Symbol, Q};
use crate::entropy::OneShotEntropies;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NonCatalyticOneShot {
    /// `log d = (H_max - H_min)/(2 alpha)`
    pub alpha_dit_log_dim: f64,
    pub ebit_yield: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalyticOneShot {
    pub activation_ebits: f64,
    /// `log d = (H_max - H_min)/(1 + alpha)`
    pub alpha_dit_log_dim: f64,
    pub ebits_returned: f64,
    pub net_yield: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OneShotLedger {
    pub alpha: f64,
    pub h_max: f64,
    pub h_min_cond: f64,
    pub epsilon: f64,
    pub noncatalytic: NonCatalyticOneShot,
    pub catalytic: CatalyticOneShot,
    /// Net yield from the exact derivation, independent of the closed forms.
    pub net_yield_exact: f64,
    /// `|(returned - activated) - net_yield_exact|`
    pub conservation_gap: f64,
}

impl OneShotLedger {
    /// Activation ebits per unit of alpha-dit log-dimension.
    pub fn activation_ratio(&self) -> Option<f64> {
        (self.catalytic.alpha_dit_log_dim > 0.0).then(|| self.catalytic.activation_ebits / self.catalytic.alpha_dit_log_dim)
    }
}

fn exact(x: f64) -> Result<Q, RateError> {
    Q::from_float(x).ok_or_else(|| RateError::Exact(format!("non-finite input {x}")))
}

/// Activation and returned ebits from the single-copy catalytic chain, with
/// ebit terms never netted across sides.
fn exact_ebits(e: &OneShotEntropies, alpha: f64) -> Result<(f64, f64), RateError> {
    let wrap = |err: calculus::CalculusError| RateError::Exact(err.to_string());
    let gap = calculus::parse_expr("Hmax(A) - Hmin(A|R)").map_err(wrap)?;
    let one_plus = RatFn::int(1).add(&RatFn::var(calculus::ALPHA));
    let steps = [
        Step::kb("oneshot-alpha-dense-coding", gap.div(&one_plus).expect("1 + alpha > 0")).map_err(wrap)?,
        Step::reversed(calculus::relation("cobit").map_err(wrap)?, gap.mul(&RatFn::constant(calculus::q(1, 2)))),
        Step::kb("oneshot-mother", RatFn::int(1)).map_err(wrap)?,
    ];
    let b = Bindings::new()
        .bind("alpha", exact(alpha)?)
        .bind("Hmax(A)", exact(e.h_max)?)
        .bind("Hmin(A|R)", exact(e.h_min_cond)?);
    let d = calculus::combine(&steps, Mode::OneShot, &b).map_err(wrap)?;
    let val = |x: RatFn| -> Result<f64, RateError> {
        let v = b.evaluate(&x).map_err(wrap)?;
        v.to_f64().ok_or_else(|| RateError::Exact("overflow".into()))
    };
    Ok((val(d.lhs.get(&Symbol::Ebit))?, val(d.rhs.get(&Symbol::Ebit))?))
}

/// Single-copy ledgers for both protocols at the given alpha.
pub fn one_shot_ledgers(e: &OneShotEntropies, alpha: f64) -> Result<OneShotLedger, RateError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(RateError::AlphaOutOfRange(alpha));
    }
    if !(e.h_max.is_finite() && e.h_min_cond.is_finite()) || e.h_max < e.h_min_cond {
        return Err(RateError::InconsistentEntropies { h_max: e.h_max, h_min_cond: e.h_min_cond });
    }
    let gap = e.h_max - e.h_min_cond;
    let noncatalytic = NonCatalyticOneShot {
        alpha_dit_log_dim: gap / (2.0 * alpha),
        ebit_yield: 0.5 * (e.h_max + e.h_min_cond),
    };
    let activation = gap / (1.0 + alpha);
    let returned = e.h_max;
    let catalytic = CatalyticOneShot {
        activation_ebits: activation,
        alpha_dit_log_dim: activation,
        ebits_returned: returned,
        net_yield: returned - activation,
    };
    let (act_exact, ret_exact) = exact_ebits(e, alpha)?;
    let net_yield_exact = ret_exact - act_exact;
    Ok(OneShotLedger {
        alpha,
        h_max: e.h_max,
        h_min_cond: e.h_min_cond,
        epsilon: e.epsilon,
        noncatalytic,
        catalytic,
        net_yield_exact,
        conservation_gap: (catalytic.net_yield - net_yield_exact).abs(),
    })
}
