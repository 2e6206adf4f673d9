//! Linear combination of relations and the dominance check.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::expr::{self, ALPHA, EPS, GAP, HMAX, I_AB, I_AR};
use super::poly::{fmt_q, q, RatFn, Q};
use super::resource::{Kind, ResourceInequality, ResourceVector, Symbol};
use super::{kb, CalculusError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// i.i.d. bookkeeping: ebits on both sides may cancel.
    Asymptotic,
    /// Single copy: ebit terms on opposite sides never cancel.
    OneShot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Reversed,
}

#[derive(Debug, Clone)]
pub struct Step {
    pub relation: ResourceInequality,
    pub multiplier: RatFn,
    pub orientation: Orientation,
}

impl Step {
    pub fn new(relation: ResourceInequality, multiplier: RatFn) -> Self {
        Step { relation, multiplier, orientation: Orientation::Forward }
    }

    pub fn reversed(relation: ResourceInequality, multiplier: RatFn) -> Self {
        Step { relation, multiplier, orientation: Orientation::Reversed }
    }

    pub fn kb(label: &str, multiplier: RatFn) -> Result<Self, CalculusError> {
        Ok(Step::new(kb::relation(label)?, multiplier))
    }
}

/// Exact values for symbols, stored in terms of the non-negative primitives.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    given: BTreeMap<String, Q>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bind a named quantity. Entropic names may be given as any two of
    /// `H(A)`, `H(A|B)`, `I(A:R)`, `I(A:B)`; `Hmin(A|R)` needs `Hmax(A)`.
    pub fn bind(mut self, name: &str, value: Q) -> Self {
        self.given.insert(canonical_name(name), value);
        self
    }

    pub fn from_entropies(h_a: f64, h_a_given_b: f64) -> Result<Self, CalculusError> {
        let f = |x: f64| Q::from_float(x).ok_or_else(|| CalculusError::Binding(format!("non-finite value {x}")));
        Ok(Bindings::new().bind("H(A)", f(h_a)?).bind("H(A|B)", f(h_a_given_b)?))
    }

    pub fn is_empty(&self) -> bool {
        self.given.is_empty()
    }

    /// Values of the primitive variables.
    pub fn primitives(&self) -> Result<BTreeMap<String, Q>, CalculusError> {
        let mut out = BTreeMap::new();
        let mut eqs: Vec<(Q, Q, Q)> = Vec::new();
        let half = q(1, 2);
        for (name, v) in &self.given {
            match name.as_str() {
                "H(A)" => eqs.push((half.clone(), half.clone(), v.clone())),
                "H(A|B)" => eqs.push((half.clone(), -half.clone(), v.clone())),
                n if n == I_AR => eqs.push((q(1, 1), q(0, 1), v.clone())),
                n if n == I_AB => eqs.push((q(0, 1), q(1, 1), v.clone())),
                "Hmin(A|R)" => {}
                n => {
                    out.insert(n.to_string(), v.clone());
                }
            }
        }
        match eqs.len() {
            0 => {}
            1 => {
                let (a, b, v) = &eqs[0];
                if b.is_zero() {
                    out.insert(I_AR.into(), v / a);
                } else if a.is_zero() {
                    out.insert(I_AB.into(), v / b);
                }
                // A lone H(A) or H(A|B) stays symbolic until its partner is bound.
            }
            _ => {
                let (a1, b1, v1) = &eqs[0];
                let (a2, b2, v2) = &eqs[1];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    return Err(CalculusError::Binding("entropic bindings are not independent".into()));
                }
                let x = (v1 * b2 - v2 * b1) / &det;
                let y = (a1 * v2 - a2 * v1) / &det;
                for (a, b, v) in &eqs[2..] {
                    if a * &x + b * &y != *v {
                        return Err(CalculusError::Binding("entropic bindings are inconsistent".into()));
                    }
                }
                out.insert(I_AR.into(), x);
                out.insert(I_AB.into(), y);
            }
        }
        if let Some(hmin) = self.given.get("Hmin(A|R)") {
            let hmax = out
                .get(HMAX)
                .cloned()
                .ok_or_else(|| CalculusError::Binding("Hmin(A|R) needs Hmax(A)".into()))?;
            out.insert(GAP.into(), hmax - hmin);
        }
        for (n, v) in &out {
            if expr::NONNEGATIVE_PRIMITIVES.contains(&n.as_str()) && v.is_negative() {
                return Err(CalculusError::Binding(format!("{n} = {} must be non-negative", fmt_q(v))));
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &RatFn) -> Result<RatFn, CalculusError> {
        let mut r = x.clone();
        for (n, v) in self.primitives()? {
            r = r
                .substitute(&n, &RatFn::constant(v))
                .ok_or_else(|| CalculusError::Substitution(format!("{n} zeroes a denominator in {x}")))?;
        }
        Ok(r)
    }

    pub fn apply_relation(&self, r: &ResourceInequality) -> Result<ResourceInequality, CalculusError> {
        let mut out = r.clone();
        for (n, v) in self.primitives()? {
            out = out.substitute(&n, &RatFn::constant(v))?;
        }
        Ok(out)
    }

    /// Exact value of `x`, if every symbol in it is bound.
    pub fn evaluate(&self, x: &RatFn) -> Result<Q, CalculusError> {
        let y = self.apply(x)?;
        y.as_constant().ok_or_else(|| CalculusError::Unbound(y.to_string()))
    }
}

fn canonical_name(name: &str) -> String {
    match name {
        "alpha" | "α" => ALPHA.into(),
        "eps" | "ε" | "epsilon" => EPS.into(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualStatus {
    Ok,
    Violated,
    Undetermined,
}

fn status(x: &RatFn) -> ResidualStatus {
    if x.is_zero() {
        return ResidualStatus::Ok;
    }
    match x.sign_hint() {
        Some(true) => ResidualStatus::Ok,
        Some(false) => ResidualStatus::Violated,
        None => ResidualStatus::Undetermined,
    }
}

fn nonnegative(x: &RatFn) -> bool {
    status(x) == ResidualStatus::Ok
}

fn orient(r: &ResourceInequality, o: Orientation) -> Result<(ResourceVector, ResourceVector), CalculusError> {
    match o {
        Orientation::Forward => Ok((r.lhs.clone(), r.rhs.clone())),
        Orientation::Reversed if r.bidirectional => Ok((r.rhs.clone(), r.lhs.clone())),
        Orientation::Reversed => Err(CalculusError::NotBidirectional(r.label.clone())),
    }
}

/// Move every symbol to the side where its net coefficient is non-negative.
/// In one-shot mode ebits are left where they are.
fn cancel(lhs: &ResourceVector, rhs: &ResourceVector, mode: Mode) -> (ResourceVector, ResourceVector) {
    let mut symbols: Vec<Symbol> = Vec::new();
    for s in lhs.symbols().chain(rhs.symbols()) {
        if !symbols.contains(s) {
            symbols.push(s.clone());
        }
    }
    let (mut l, mut r) = (ResourceVector::new(), ResourceVector::new());
    for s in symbols {
        if s.kind() == Kind::Ebit && mode == Mode::OneShot {
            l.add_term(s.clone(), lhs.get(&s));
            r.add_term(s.clone(), rhs.get(&s));
            continue;
        }
        let net = rhs.get(&s).sub(&lhs.get(&s));
        match net.sign_hint() {
            Some(false) => l.add_term(s, net.neg()),
            _ => r.add_term(s, net),
        }
    }
    (l, r)
}

/// Sum of multiplied, oriented relations with intermediate resources cancelled.
pub fn combine(steps: &[Step], mode: Mode, bindings: &Bindings) -> Result<ResourceInequality, CalculusError> {
    let (mut lhs, mut rhs) = (ResourceVector::new(), ResourceVector::new());
    let mut catalytic = false;
    let mut tags = BTreeSet::new();
    let mut alpha: Option<RatFn> = None;
    let mut labels = Vec::new();
    for step in steps {
        let rel = bindings.apply_relation(&step.relation)?;
        let m = bindings.apply(&step.multiplier)?;
        if !nonnegative(&m) {
            return Err(CalculusError::NegativeMultiplier { label: rel.label.clone(), multiplier: m.to_string() });
        }
        let (l, r) = orient(&rel, step.orientation)?;
        if m.is_zero() {
            continue;
        }
        for a in l.alphas().into_iter().chain(r.alphas()) {
            match &alpha {
                Some(b) if !b.equals(&a) => return Err(CalculusError::MixedAlpha(b.to_string(), a.to_string())),
                Some(_) => {}
                None => alpha = Some(a),
            }
        }
        lhs = lhs.plus(&l.scaled(&m));
        rhs = rhs.plus(&r.scaled(&m));
        catalytic |= rel.catalytic;
        tags.extend(rel.tags.iter().cloned());
        labels.push(match step.orientation {
            Orientation::Forward => rel.label.clone(),
            Orientation::Reversed => format!("{}~", rel.label),
        });
    }
    let (lhs, rhs) = cancel(&lhs, &rhs, mode);
    let mut out = ResourceInequality::new(&labels.join("+"), lhs, rhs, catalytic, false);
    out.tags = tags;
    Ok(out)
}

fn ser_display<S: Serializer>(x: &RatFn, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualEntry {
    pub symbol: String,
    /// `net` compares right-minus-left totals; `lhs`/`rhs` are one-shot ebit sides.
    pub side: &'static str,
    #[serde(serialize_with = "ser_display")]
    pub value: RatFn,
    pub status: ResidualStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub target: String,
    pub pass: bool,
    pub catalytic: bool,
    pub mode: Mode,
    pub derived: Option<String>,
    pub residual: Vec<ResidualEntry>,
    pub tags: Vec<String>,
    pub reason: Option<String>,
}

impl Verdict {
    pub fn residual_of(&self, kind: Kind) -> Vec<&ResidualEntry> {
        let tag = kind_tag(kind);
        self.residual.iter().filter(|e| e.symbol.starts_with(tag)).collect()
    }

    pub fn is_zero_residual(&self) -> bool {
        self.residual.is_empty()
    }
}

fn kind_tag(kind: Kind) -> &'static str {
    match kind {
        Kind::Qbit => "[q->q]",
        Kind::Ebit => "[qq]",
        Kind::Cbit => "[c->c]",
        Kind::Cobit => "[q->qq]",
        Kind::Abit => "[alpha",
        Kind::Zbit => "[0]",
        Kind::State => "<",
    }
}

/// PASS iff the combined steps dominate `target` coefficient-wise.
pub fn check_derivation(target: &ResourceInequality, steps: &[Step], mode: Mode, bindings: &Bindings) -> Verdict {
    let catalytic = steps.iter().any(|s| s.relation.catalytic);
    let mut verdict = Verdict {
        target: target.label.clone(),
        pass: false,
        catalytic,
        mode,
        derived: None,
        residual: Vec::new(),
        tags: Vec::new(),
        reason: None,
    };
    let derived = match combine(steps, mode, bindings) {
        Ok(d) => d,
        Err(e) => {
            verdict.reason = Some(e.to_string());
            return verdict;
        }
    };
    let target_n = match combine(&[Step::new(target.clone(), RatFn::int(1))], mode, bindings) {
        Ok(t) => t,
        Err(e) => {
            verdict.reason = Some(e.to_string());
            return verdict;
        }
    };
    verdict.derived = Some(derived.to_string());
    verdict.tags = derived.tags.iter().cloned().collect();

    let mut symbols: Vec<Symbol> = Vec::new();
    for s in [&derived.lhs, &derived.rhs, &target_n.lhs, &target_n.rhs].into_iter().flat_map(|v| v.symbols()) {
        if !symbols.contains(s) {
            symbols.push(s.clone());
        }
    }
    for s in symbols {
        let mut push = |side: &'static str, value: RatFn| {
            if !value.is_zero() {
                let st = status(&value);
                verdict.residual.push(ResidualEntry { symbol: s.to_string(), side, value, status: st });
            }
        };
        if s.kind() == Kind::Ebit && mode == Mode::OneShot {
            push("lhs", target_n.lhs.get(&s).sub(&derived.lhs.get(&s)));
            push("rhs", derived.rhs.get(&s).sub(&target_n.rhs.get(&s)));
        } else {
            let net_d = derived.rhs.get(&s).sub(&derived.lhs.get(&s));
            let net_t = target_n.rhs.get(&s).sub(&target_n.lhs.get(&s));
            push("net", net_d.sub(&net_t));
        }
    }
    verdict.pass = verdict.residual.iter().all(|e| e.status == ResidualStatus::Ok);
    if !verdict.pass {
        let bad: Vec<String> = verdict
            .residual
            .iter()
            .filter(|e| e.status != ResidualStatus::Ok)
            .map(|e| format!("{} ({}) = {}", e.symbol, e.side, e.value))
            .collect();
        verdict.reason = Some(format!("not dominated: {}", bad.join(", ")));
    }
    verdict
}

/// Outcome of running a hypothetical merging rate backwards into a mother protocol.
#[derive(Debug, Clone)]
pub struct ReverseMother {
    pub hypothesis: ResourceInequality,
    pub derived: ResourceInequality,
    pub implied_qubit_rate: Q,
    pub threshold: Q,
    pub contradiction: bool,
}

/// Feed `rate` α-bits per copy through reversed α-bit dense coding and
/// forward cobit conversion; the qubit cost that results must not undercut
/// `I(A:R)/2`. With no explicit `alpha`, α = H(A|B)/H(A).
pub fn reverse_mother_extraction(
    rate: &RatFn,
    alpha: Option<&RatFn>,
    bindings: &Bindings,
) -> Result<ReverseMother, CalculusError> {
    let alpha = match alpha {
        Some(a) => a.clone(),
        None => expr::h_a_given_b().div(&expr::h_a()).ok_or_else(|| CalculusError::Binding("H(A) = 0".into()))?,
    };
    let hypothesis = ResourceInequality::new(
        "hypothetical-merging",
        ResourceVector::new()
            .with(RatFn::int(1), Symbol::State("psi_ABR".into()))
            .with(rate.clone(), Symbol::Abit(alpha.clone())),
        ResourceVector::new().with(RatFn::int(1), Symbol::State("psi_A'BR".into())),
        false,
        false,
    );
    let dense = kb::relation("alpha-dense-coding")?.substitute(ALPHA, &alpha)?;
    let cobit_rate = rate.mul(&RatFn::int(1).add(&alpha)).mul(&RatFn::constant(q(1, 2)));
    let steps = [
        Step::new(hypothesis.clone(), RatFn::int(1)),
        Step::reversed(dense, rate.clone()),
        Step::new(kb::relation("cobit")?, cobit_rate),
    ];
    let derived = combine(&steps, Mode::Asymptotic, bindings)?;
    let implied = derived.lhs.get(&Symbol::Qbit).sub(&derived.rhs.get(&Symbol::Qbit));
    let implied_qubit_rate = bindings.evaluate(&implied)?;
    let threshold = bindings.evaluate(&RatFn::var(I_AR).mul(&RatFn::constant(q(1, 2))))?;
    Ok(ReverseMother {
        contradiction: implied_qubit_rate < threshold,
        hypothesis,
        derived,
        implied_qubit_rate,
        threshold,
    })
}
