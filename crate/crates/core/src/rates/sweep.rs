use serde::Serialize;

use super::{catalytic_rate, in_k_alpha, n_alpha_rate, noncatalytic_rate, PureEntropies, RateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Panel {
    /// Rates against `H(A|B)/H(A)` at fixed alpha.
    Left,
    /// Rates against alpha at fixed `H(A|B)/H(A)`.
    Right,
}

impl std::str::FromStr for Panel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "left" => Ok(Panel::Left),
            "right" => Ok(Panel::Right),
            other => Err(format!("unknown panel {other:?} (expected left or right)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    /// Unit of the raw columns.
    pub h_a: f64,
    pub left_alphas: Vec<f64>,
    pub right_ratio: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { points: 201, h_a: 1.0, left_alphas: vec![0.45, 0.8], right_ratio: 0.2 }
    }
}

/// One CSV row. Normalized columns are rate / H(A).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatePoint {
    pub panel: Panel,
    pub alpha: f64,
    #[serde(rename = "hABratio")]
    pub ratio: f64,
    pub catalytic: f64,
    pub noncatalytic: f64,
    pub nalpha: f64,
    #[serde(rename = "inKAlpha")]
    pub in_k_alpha: bool,
    #[serde(rename = "validFlags")]
    pub valid_flags: String,
    #[serde(rename = "hA")]
    pub h_a: f64,
    #[serde(rename = "hAB")]
    pub cond_ab: f64,
    #[serde(rename = "iAR")]
    pub mut_ar: f64,
    #[serde(rename = "iAB")]
    pub mut_ab: f64,
    #[serde(rename = "catalyticRaw")]
    pub catalytic_raw: f64,
    #[serde(rename = "noncatalyticRaw")]
    pub noncatalytic_raw: f64,
    #[serde(rename = "nalphaRaw")]
    pub nalpha_raw: f64,
}

impl RatePoint {
    fn at(panel: Panel, alpha: f64, ratio: f64, h_a: f64) -> Result<Self, RateError> {
        let e = PureEntropies::new(h_a, ratio * h_a)?;
        let mut flags = Vec::new();
        // Out-of-range alpha keeps its closed-form value and is flagged, never clamped.
        let cat = match catalytic_rate(&e, alpha) {
            Ok(r) => {
                if let Some(why) = r.reason {
                    flags.push(format!("catalytic:{why}"));
                }
                r.value
            }
            Err(err) => {
                flags.push(format!("catalytic:{err}"));
                e.mut_ar() / (1.0 + alpha)
            }
        };
        let noncat = match noncatalytic_rate(&e, alpha) {
            Ok(r) => r.value,
            Err(RateError::ZeroBitDivergence { .. }) => {
                flags.push("noncatalytic:divergent at alpha = 0".into());
                f64::INFINITY
            }
            Err(err) => {
                flags.push(format!("noncatalytic:{err}"));
                e.mut_ar() / (2.0 * alpha)
            }
        };
        let na = n_alpha_rate(&e, alpha);
        if let Some(why) = na.reason {
            flags.push(format!("nalpha:{why}"));
        }
        let norm = |x: f64| if h_a > 0.0 { x / h_a } else { f64::NAN };
        Ok(RatePoint {
            panel,
            alpha,
            ratio,
            catalytic: norm(cat),
            noncatalytic: norm(noncat),
            nalpha: norm(na.value),
            in_k_alpha: in_k_alpha(&e, alpha),
            valid_flags: flags.join("|"),
            h_a,
            cond_ab: e.cond_ab,
            mut_ar: e.mut_ar(),
            mut_ab: e.mut_ab(),
            catalytic_raw: cat,
            noncatalytic_raw: noncat,
            nalpha_raw: na.value,
        })
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    // endpoints are exact: x_0 = lo, x_{n-1} = hi
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

/// Left: for each alpha in `left_alphas`, `H(A|B)/H(A)` over `[0, alpha]`.
/// Right: alpha over `[0, 1]` at `right_ratio`; alpha = 0 is kept and flagged.
pub fn sweep_rates(panel: Panel, spec: &GridSpec) -> Result<Vec<RatePoint>, RateError> {
    if spec.points < 2 {
        return Err(RateError::BadGrid(spec.points));
    }
    match panel {
        Panel::Left => spec
            .left_alphas
            .iter()
            .flat_map(|&a| grid(0.0, a, spec.points).map(move |x| (a, x)))
            .map(|(a, x)| RatePoint::at(panel, a, x, spec.h_a))
            .collect(),
        Panel::Right => grid(0.0, 1.0, spec.points).map(|a| RatePoint::at(panel, a, spec.right_ratio, spec.h_a)).collect(),
    }
}
