use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use alphamerge::alpha_channel::verify_duality;
use alphamerge::calculus::{run_script, ScriptCheck};
use alphamerge::entropy::{one_shot_entropies, EntropyError, EntropyReport, OneShotEntropies};
use alphamerge::protocols::{mother_protocol_run, noncatalytic_merge, transmitted_qubits, MergeOptions, ProtocolReport};
use alphamerge::rates::{one_shot_ledgers, sweep_rates, GridSpec, OneShotLedger, Panel};
use alphamerge::Error;
use serde::Serialize;
use serde_json::json;

use crate::{inputs, Format, Global, Protocol};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
    CheckFailed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Lib(Error::Entropy(EntropyError::NonConvergence { .. })) => 4,
            CliError::Lib(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io: {e}"),
            CliError::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Lib(e.into())
    }
}

type Res = Result<(), CliError>;

fn emit(g: &Global, bytes: &[u8]) -> Res {
    match &g.out {
        Some(p) => std::fs::write(p, bytes).map_err(CliError::Io),
        None => std::io::stdout().write_all(bytes).map_err(CliError::Io),
    }
}

fn json_bytes<T: Serialize + ?Sized>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("report serializes");
    s.push(b'\n');
    s
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    }
    w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

fn check_eps(eps: f64) -> Res {
    if !(0.0..=0.3).contains(&eps) {
        return Err(CliError::Usage(format!("--eps {eps} outside [0, 0.3]")));
    }
    Ok(())
}

fn one_shot(psi: &alphamerge::State, eps: f64, copies: usize) -> Result<OneShotEntropies, CliError> {
    check_eps(eps)?;
    if copies == 0 {
        return Err(CliError::Usage("--copies must be at least 1".into()));
    }
    Ok(one_shot_entropies(psi, &["A"], &["R"], copies, eps)?)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EntropyRow {
    #[serde(rename = "hA")]
    h_a: f64,
    #[serde(rename = "hB")]
    h_b: f64,
    #[serde(rename = "hAB")]
    h_ab: f64,
    #[serde(rename = "hR")]
    h_r: f64,
    #[serde(rename = "condAB")]
    cond_ab: f64,
    #[serde(rename = "mutAR")]
    mut_ar: f64,
    #[serde(rename = "mutAB")]
    mut_ab: f64,
    coherent_info: f64,
    h_max: f64,
    h_min_cond: f64,
    epsilon: f64,
    copies: usize,
}

pub fn entropy(g: &Global, state: &str, eps: f64, copies: usize) -> Res {
    let psi = inputs::state(state)?;
    let report = EntropyReport::from_state(&psi)?;
    let os = one_shot(&psi, eps, copies)?;
    match g.format.unwrap_or(Format::Json) {
        Format::Json => emit(g, &json_bytes(&json!({ "state": state, "dims": psi.dims(), "report": report, "oneShot": os, "copies": copies }))),
        Format::Csv => emit(
            g,
            &csv_bytes(&[EntropyRow {
                h_a: report.h_a,
                h_b: report.h_b,
                h_ab: report.h_ab,
                h_r: report.h_r,
                cond_ab: report.cond_ab,
                mut_ar: report.mut_ar,
                mut_ab: report.mut_ab,
                coherent_info: report.coherent_info,
                h_max: os.h_max,
                h_min_cond: os.h_min_cond,
                epsilon: eps,
                copies,
            }])?,
        ),
    }
}

pub struct MergeArgs {
    pub protocol: Protocol,
    pub state: String,
    pub n: usize,
    pub log_c: Option<usize>,
    pub channel: Option<String>,
    pub delta: f64,
    pub margin: usize,
    pub expect: Option<f64>,
    pub timing: bool,
}

pub fn merge_sim(g: &Global, a: MergeArgs) -> Res {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let psi = inputs::state(&a.state)?;
    let opts = MergeOptions { delta: a.delta, margin_qubits: a.margin };
    let mut report: ProtocolReport = match a.protocol {
        Protocol::Mother => {
            if a.channel.is_some() {
                return Err(CliError::Usage("--channel only applies to --protocol noncat".into()));
            }
            let log_c = match a.log_c {
                Some(k) => k,
                None => {
                    // The margin never asks for more than the whole A register.
                    let register = (a.n as f64 * (psi.dims()[0] as f64).log2() + 1e-9).floor() as usize;
                    transmitted_qubits(EntropyReport::from_state(&psi)?.mut_ar, a.n, a.margin).min(register)
                }
            };
            mother_protocol_run(&psi, a.n, log_c, g.seed, &opts)?
        }
        Protocol::Noncat => {
            if a.log_c.is_some() {
                return Err(CliError::Usage("--logC is sized automatically for --protocol noncat".into()));
            }
            let ch = a.channel.as_deref().ok_or_else(|| CliError::Usage("--protocol noncat needs --channel".into()))?;
            let (ch, spec) = inputs::channel(ch, g.seed)?;
            noncatalytic_merge(&psi, a.n, &ch, &spec, g.seed, &opts)?
        }
    };
    if a.timing {
        eprintln!("wall clock {:.3} s", report.wall_clock);
    } else {
        report.wall_clock = 0.0;
    }
    match g.format.unwrap_or(Format::Json) {
        Format::Json => emit(g, &json_bytes(&report))?,
        Format::Csv => emit(g, format!("{}\n{}\n", ProtocolReport::csv_header(), report.csv_row()).as_bytes())?,
    }
    match a.expect {
        Some(f) if report.merge_fidelity < f - g.tol => {
            Err(CliError::CheckFailed(format!("mergeFidelity {} < expected {f}", report.merge_fidelity)))
        }
        _ => Ok(()),
    }
}

pub fn sweep(g: &Global, panel: Panel, points: usize, h_a: f64) -> Res {
    if !(h_a.is_finite() && h_a > 0.0) {
        return Err(CliError::Usage(format!("--h-a {h_a} must be positive")));
    }
    let spec = GridSpec { points, h_a, ..GridSpec::default() };
    let rows = sweep_rates(panel, &spec)?;
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(g, &csv_bytes(&rows)?),
        Format::Json => emit(g, &json_bytes(&rows)),
    }
}

pub fn duality(g: &Global, channel: &str, k: usize) -> Res {
    let (ch, spec) = inputs::channel(channel, g.seed)?;
    let report = verify_duality(&ch, k, g.samples, g.seed)?;
    eprintln!(
        "alpha = {:.4}, k = {k}: min fidelity {:.6}, max deficit {:.6}, forgetfulness >= {:.6}, checks {}",
        spec.alpha,
        report.min_fidelity(),
        report.max_deficit(),
        report.forgetfulness.lower_bound,
        if report.checks.all() { "hold" } else { "VIOLATED" }
    );
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(g, &csv_bytes(&report.points)?)?,
        Format::Json => emit(
            g,
            &json_bytes(&json!({
                "channel": channel,
                "alpha": spec.alpha,
                "k": k,
                "points": report.points,
                "forgetfulnessLowerBound": report.forgetfulness.lower_bound,
                "forgetfulnessSamples": report.forgetfulness.samples,
                "envelope": report.envelope,
                "checks": report.checks,
            })),
        )?,
    }
    if report.checks.all() {
        Ok(())
    } else {
        Err(CliError::CheckFailed("duality implications violated".into()))
    }
}

fn describe(check: &ScriptCheck) -> String {
    match check {
        ScriptCheck::Derivation(v) => {
            let mut s = if v.pass { "PASS".to_string() } else { "FAIL".to_string() };
            if v.pass && v.catalytic {
                s.push_str(" (catalytic)");
            }
            if let Some(r) = &v.reason {
                s.push_str(&format!(" [{r}]"));
            }
            if !v.tags.is_empty() {
                s.push_str(&format!(" tags {{{}}}", v.tags.join(", ")));
            }
            s
        }
        ScriptCheck::ReverseMother { implied_qubit_rate, threshold, contradiction, .. } => {
            let tag = if *contradiction { "CONTRADICTION" } else { "CONSISTENT" };
            format!("{tag} implied qubit rate {implied_qubit_rate} vs I(A:R)/2 = {threshold}")
        }
    }
}

pub fn derive(g: &Global, scripts: &[PathBuf]) -> Res {
    let mut text = String::new();
    let mut all = Vec::new();
    let mut failed = 0;
    for path in scripts {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let report = run_script(&src)?;
        if report.entries.is_empty() {
            return Err(CliError::Usage(format!("{} contains no checks", path.display())));
        }
        for e in &report.entries {
            let mark = if e.ok { "ok  " } else { "BAD " };
            failed += usize::from(!e.ok);
            text.push_str(&format!("{mark} {}:{} {} -> {}\n", path.display(), e.line, e.statement, describe(&e.check)));
        }
        all.push(json!({ "script": path.display().to_string(), "entries": report.entries }));
    }
    let total: usize = all.iter().map(|r| r["entries"].as_array().map_or(0, Vec::len)).sum();
    text.push_str(&format!("{} of {total} checks as declared\n", total - failed));
    match g.format {
        Some(Format::Json) => emit(g, &json_bytes(&all))?,
        Some(Format::Csv) => return Err(CliError::Usage("derive writes text or JSON".into())),
        None => emit(g, text.as_bytes())?,
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("{failed} derivation checks did not hold")))
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LedgerRow {
    alpha: f64,
    h_max: f64,
    h_min_cond: f64,
    epsilon: f64,
    noncat_alpha_dit_log_dim: f64,
    noncat_ebit_yield: f64,
    activation_ebits: f64,
    cat_alpha_dit_log_dim: f64,
    ebits_returned: f64,
    net_yield: f64,
    net_yield_exact: f64,
    conservation_gap: f64,
}

impl From<&OneShotLedger> for LedgerRow {
    fn from(l: &OneShotLedger) -> Self {
        LedgerRow {
            alpha: l.alpha,
            h_max: l.h_max,
            h_min_cond: l.h_min_cond,
            epsilon: l.epsilon,
            noncat_alpha_dit_log_dim: l.noncatalytic.alpha_dit_log_dim,
            noncat_ebit_yield: l.noncatalytic.ebit_yield,
            activation_ebits: l.catalytic.activation_ebits,
            cat_alpha_dit_log_dim: l.catalytic.alpha_dit_log_dim,
            ebits_returned: l.catalytic.ebits_returned,
            net_yield: l.catalytic.net_yield,
            net_yield_exact: l.net_yield_exact,
            conservation_gap: l.conservation_gap,
        }
    }
}

pub fn oneshot_ledger(g: &Global, state: &str, alpha: f64, eps: f64, copies: usize) -> Res {
    let psi = inputs::state(state)?;
    let os = one_shot(&psi, eps, copies)?;
    let ledger = one_shot_ledgers(&os, alpha)?;
    match g.format.unwrap_or(Format::Json) {
        Format::Json => emit(g, &json_bytes(&json!({ "state": state, "copies": copies, "ledger": ledger }))),
        Format::Csv => emit(g, &csv_bytes(&[LedgerRow::from(&ledger)])?),
    }
}
