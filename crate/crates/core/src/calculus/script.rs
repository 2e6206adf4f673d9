//! Line-oriented derivation scripts.
//!
//! Statements are separated by newlines or `;`; `#` starts a comment.
//!
//! ```text
//! mode asymptotic | oneshot
//! let H(A) = 1
//! relation my-rel: 1[qq] + 2[c->c] >= 1[q->q]
//! use alpha-dense-coding x1
//! use zero-bit-teleportation x(1+alpha) reversed with alpha = 1/2
//! expect alpha-as-ebits          # derivation must pass; clears the steps
//! expect alpha-as-ebits reversed # right-to-left direction of an equality
//! refute <psi_ABR> >= <psi_A'BR> # derivation must fail; clears the steps
//! contradiction H(A) - 1/100     # reverse-mother check must fire
//! consistent H(A)                # reverse-mother check must not fire
//! ```

use serde::Serialize;

use super::engine::{check_derivation, reverse_mother_extraction, Bindings, Mode, Orientation, Step, Verdict};
use super::expr::{parse_expr, ALPHA, EPS};
use super::poly::{fmt_q, RatFn};
use super::resource::ResourceInequality;
use super::{kb, CalculusError};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScriptCheck {
    Derivation(Verdict),
    ReverseMother {
        rate: String,
        implied_qubit_rate: String,
        threshold: String,
        contradiction: bool,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ScriptEntry {
    pub line: usize,
    pub statement: String,
    pub expected_pass: bool,
    pub check: ScriptCheck,
    /// Whether the outcome matched the expectation.
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ScriptReport {
    pub entries: Vec<ScriptEntry>,
}

impl ScriptReport {
    pub fn all_ok(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.ok)
    }
}

struct State {
    mode: Mode,
    bindings: Bindings,
    relations: Vec<ResourceInequality>,
    steps: Vec<Step>,
}

impl State {
    fn lookup(&self, label: &str) -> Result<ResourceInequality, CalculusError> {
        if let Some(r) = self.relations.iter().find(|r| r.label == label) {
            return Ok(r.clone());
        }
        kb::relation(label)
    }

    fn target(&self, spec: &str) -> Result<ResourceInequality, CalculusError> {
        if let Some(head) = spec.strip_suffix("reversed") {
            let t = self.target(head.trim())?;
            if !t.bidirectional {
                return Err(CalculusError::NotBidirectional(t.label));
            }
            return Ok(ResourceInequality { lhs: t.rhs, rhs: t.lhs, ..t });
        }
        if spec.contains(">=") || spec.contains('=') || spec.contains('≥') {
            ResourceInequality::parse("inline", spec)
        } else {
            self.lookup(spec)
        }
    }
}

fn variable(name: &str) -> Result<String, CalculusError> {
    match name {
        "alpha" | "α" => Ok(ALPHA.into()),
        "eps" | "ε" => Ok(EPS.into()),
        n if n.chars().all(|c| c.is_alphanumeric() || c == '_') => Ok(n.into()),
        n => Err(CalculusError::Substitution(format!("{n} is not a substitutable variable"))),
    }
}

fn parse_use(state: &State, body: &str) -> Result<Step, CalculusError> {
    let (head, with) = match body.split_once(" with ") {
        Some((h, w)) => (h.trim(), Some(w)),
        None => (body.trim(), None),
    };
    let (head, orientation) = match head.strip_suffix("reversed") {
        Some(h) => (h.trim(), Orientation::Reversed),
        None => (head, Orientation::Forward),
    };
    let (label, mult) = match head.split_once(char::is_whitespace) {
        Some((l, m)) => (l, m.trim()),
        None => (head, ""),
    };
    let multiplier = match mult {
        "" => RatFn::int(1),
        m => {
            let e = m.strip_prefix('x').or_else(|| m.strip_prefix('×')).ok_or_else(|| CalculusError::Parse {
                input: m.into(),
                at: 0,
                msg: "multiplier must start with 'x'".into(),
            })?;
            parse_expr(e)?
        }
    };
    let mut relation = state.lookup(label)?;
    let mut multiplier = multiplier;
    for sub in with.into_iter().flat_map(|w| w.split(',')) {
        let (v, e) = sub.split_once('=').ok_or_else(|| CalculusError::Substitution(sub.trim().into()))?;
        let v = variable(v.trim())?;
        let e = parse_expr(e)?;
        relation = relation.substitute(&v, &e)?;
        multiplier = multiplier
            .substitute(&v, &e)
            .ok_or_else(|| CalculusError::Substitution(format!("{v} in multiplier")))?;
    }
    Ok(Step { relation, multiplier, orientation })
}

fn statements(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().flat_map(|(i, line)| {
        let code = line.split('#').next().unwrap_or("");
        code.split(';').map(str::trim).filter(|s| !s.is_empty()).map(move |s| (i + 1, s))
    })
}

pub fn run_script(src: &str) -> Result<ScriptReport, CalculusError> {
    let mut st = State { mode: Mode::Asymptotic, bindings: Bindings::new(), relations: Vec::new(), steps: Vec::new() };
    let mut report = ScriptReport::default();
    for (line, stmt) in statements(src) {
        let at = |e: CalculusError| CalculusError::Script { line, msg: e.to_string() };
        let (cmd, rest) = stmt.split_once(char::is_whitespace).unwrap_or((stmt, ""));
        let rest = rest.trim();
        match cmd {
            "mode" => {
                st.mode = match rest {
                    "asymptotic" | "catalytic" | "iid" => Mode::Asymptotic,
                    "oneshot" | "one-shot" => Mode::OneShot,
                    m => return Err(CalculusError::Script { line, msg: format!("unknown mode {m:?}") }),
                }
            }
            "let" => {
                let (name, value) = rest
                    .split_once('=')
                    .ok_or_else(|| CalculusError::Script { line, msg: "expected 'let NAME = VALUE'".into() })?;
                let v = parse_expr(value).map_err(at)?;
                let v = st.bindings.evaluate(&v).map_err(at)?;
                st.bindings = std::mem::take(&mut st.bindings).bind(name.trim(), v);
                st.bindings.primitives().map_err(at)?;
            }
            "relation" => {
                let (label, text) = rest
                    .split_once(':')
                    .ok_or_else(|| CalculusError::Script { line, msg: "expected 'relation LABEL: ...'".into() })?;
                let r = ResourceInequality::parse(label.trim(), text).map_err(at)?;
                st.relations.retain(|x| x.label != r.label);
                st.relations.push(r);
            }
            "use" => {
                let step = parse_use(&st, rest).map_err(at)?;
                st.steps.push(step);
            }
            "expect" | "refute" => {
                let target = st.target(rest).map_err(at)?;
                let verdict = check_derivation(&target, &st.steps, st.mode, &st.bindings);
                let expected_pass = cmd == "expect";
                st.steps.clear();
                report.entries.push(ScriptEntry {
                    line,
                    statement: stmt.to_string(),
                    expected_pass,
                    ok: verdict.pass == expected_pass,
                    check: ScriptCheck::Derivation(verdict),
                });
            }
            "contradiction" | "consistent" => {
                let rate = parse_expr(rest).map_err(at)?;
                let r = reverse_mother_extraction(&rate, None, &st.bindings).map_err(at)?;
                let expected_pass = cmd == "contradiction";
                report.entries.push(ScriptEntry {
                    line,
                    statement: stmt.to_string(),
                    expected_pass,
                    ok: r.contradiction == expected_pass,
                    check: ScriptCheck::ReverseMother {
                        rate: rest.to_string(),
                        implied_qubit_rate: fmt_q(&r.implied_qubit_rate),
                        threshold: fmt_q(&r.threshold),
                        contradiction: r.contradiction,
                    },
                });
            }
            other => return Err(CalculusError::Script { line, msg: format!("unknown statement {other:?}") }),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scripts_hold() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scripts");
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let src = std::fs::read_to_string(&path).unwrap();
            let report = run_script(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            for e in &report.entries {
                if !e.ok {
                    panic!("{}:{} {}\n{:#?}", path.display(), e.line, e.statement, e.check);
                }
            }
        }
    }
}
