//! State and channel arguments given on the command line.

use alphamerge::alpha_channel::{make_n_alpha, AlphaDitSpec};
use alphamerge::hilbert::builtin_state;
use alphamerge::{rng, Channel, State};

use crate::commands::CliError;

pub fn state(spec: &str) -> Result<State, CliError> {
    let psi = match spec.strip_prefix("file:") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            State::from_json_str(&text).map_err(|e| CliError::Usage(format!("bad state file {path}: {e}")))?
        }
        None => builtin_state(spec).map_err(|e| CliError::Usage(e.to_string()))?,
    };
    if psi.factors().len() != 3 {
        return Err(CliError::Usage(format!("state must have three factors A, B, R; got {}", psi.factors().len())));
    }
    // unnamed JSON factors come in as S0, S1, S2
    let mut psi = psi;
    if psi.names() == ["S0", "S1", "S2"] {
        for (old, new) in [("S0", "A"), ("S1", "B"), ("S2", "R")] {
            psi = psi.rename(old, new).map_err(|e| CliError::Usage(e.to_string()))?;
        }
    }
    if psi.names() != ["A", "B", "R"] {
        return Err(CliError::Usage(format!("state factors must be named A, B, R; got {:?}", psi.names())));
    }
    Ok(psi)
}

/// `nalpha:dA,dB,dE`; the isometry is drawn from `child_seed(seed, 1)`.
pub fn channel(spec: &str, seed: u64) -> Result<(Channel, AlphaDitSpec), CliError> {
    let bad = || CliError::Usage(format!("channel spec {spec:?} must look like nalpha:16,8,2"));
    let dims: Vec<usize> = spec
        .strip_prefix("nalpha:")
        .ok_or_else(bad)?
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [d_a, d_b, d_e] = dims[..] else { return Err(bad()) };
    make_n_alpha(d_a, d_b, d_e, rng::child_seed(seed, 1)).map_err(|e| CliError::Lib(e.into()))
}
