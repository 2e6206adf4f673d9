use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::linalg::{CMat, CVec};
use super::{HilbertError, MultipartiteState, StateData, SystemLabel};
use crate::scalar::Real;

/// Wire format: `{dims, kind: "pure"|"mixed", data: [re, im, re, im, ...]}`
/// with matrices row-major. `labels` is optional; missing labels become
/// `S0, S1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dims: Vec<usize>,
    pub kind: String,
    pub data: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl<T: Real> MultipartiteState<T> {
    pub fn to_json(&self) -> StateJson {
        let mut data = Vec::new();
        let kind = match self.data() {
            StateData::Pure(v) => {
                for z in v.iter() {
                    data.push(z.re.as_f64());
                    data.push(z.im.as_f64());
                }
                "pure"
            }
            StateData::Mixed(m) => {
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        data.push(m[(i, j)].re.as_f64());
                        data.push(m[(i, j)].im.as_f64());
                    }
                }
                "mixed"
            }
        };
        StateJson {
            dims: self.dims(),
            kind: kind.to_string(),
            data,
            labels: Some(self.names().iter().map(|s| s.to_string()).collect()),
        }
    }

    /// Parse and validate.
    pub fn from_json(json: &StateJson) -> Result<Self, HilbertError> {
        let names: Vec<String> = match &json.labels {
            Some(l) if l.len() == json.dims.len() => l.clone(),
            Some(l) => {
                return Err(HilbertError::Json(format!(
                    "{} labels for {} dims",
                    l.len(),
                    json.dims.len()
                )))
            }
            None => (0..json.dims.len()).map(|i| format!("S{i}")).collect(),
        };
        let factors = names
            .iter()
            .zip(&json.dims)
            .map(|(n, &d)| SystemLabel::new(n.clone(), d))
            .collect::<Result<Vec<_>, _>>()?;
        let total = json
            .dims
            .iter()
            .try_fold(1usize, |a, &d| a.checked_mul(d))
            .ok_or_else(|| HilbertError::Json("dimension overflow".into()))?;
        if total > super::MAX_DIM {
            return Err(HilbertError::TooLarge(total));
        }
        let z = |k: usize| Complex::new(T::lit(json.data[2 * k]), T::lit(json.data[2 * k + 1]));
        match json.kind.as_str() {
            "pure" => {
                if json.data.len() != 2 * total {
                    return Err(HilbertError::Json(format!(
                        "pure state of dimension {total} needs {} numbers, got {}",
                        2 * total,
                        json.data.len()
                    )));
                }
                Self::pure(factors, CVec::from_fn(total, |k, _| z(k)))
            }
            "mixed" => {
                if json.data.len() != 2 * total * total {
                    return Err(HilbertError::Json(format!(
                        "mixed state of dimension {total} needs {} numbers, got {}",
                        2 * total * total,
                        json.data.len()
                    )));
                }
                Self::mixed(factors, CMat::from_fn(total, total, |i, j| z(i * total + j)))
            }
            other => Err(HilbertError::Json(format!("unknown kind {other:?}"))),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("state JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, HilbertError> {
        let j: StateJson = serde_json::from_str(s).map_err(|e| HilbertError::Json(e.to_string()))?;
        Self::from_json(&j)
    }
}
