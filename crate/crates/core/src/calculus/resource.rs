//! Basis symbols, resource vectors and inequalities, and their text format.

use std::collections::BTreeSet;
use std::fmt;

use super::expr::{self, Parser};
use super::poly::RatFn;
use super::CalculusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Qbit,
    Ebit,
    Cbit,
    Cobit,
    Abit,
    Zbit,
    State,
}

/// A basis resource. `Abit` carries its α, `State` its name.
#[derive(Debug, Clone)]
pub enum Symbol {
    Qbit,
    Ebit,
    Cbit,
    Cobit,
    Abit(RatFn),
    Zbit,
    State(String),
}

impl Symbol {
    pub fn kind(&self) -> Kind {
        match self {
            Symbol::Qbit => Kind::Qbit,
            Symbol::Ebit => Kind::Ebit,
            Symbol::Cbit => Kind::Cbit,
            Symbol::Cobit => Kind::Cobit,
            Symbol::Abit(_) => Kind::Abit,
            Symbol::Zbit => Kind::Zbit,
            Symbol::State(_) => Kind::State,
        }
    }

    pub fn alpha(&self) -> Option<&RatFn> {
        match self {
            Symbol::Abit(a) => Some(a),
            _ => None,
        }
    }

    fn substitute(&self, v: &str, value: &RatFn) -> Option<Symbol> {
        Some(match self {
            Symbol::Abit(a) => Symbol::Abit(a.substitute(v, value)?),
            s => s.clone(),
        })
    }
}

impl PartialEq for Symbol {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Symbol::Abit(a), Symbol::Abit(b)) => a.equals(b),
            (Symbol::State(a), Symbol::State(b)) => a == b,
            _ => self.kind() == o.kind(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Qbit => write!(f, "[q->q]"),
            Symbol::Ebit => write!(f, "[qq]"),
            Symbol::Cbit => write!(f, "[c->c]"),
            Symbol::Cobit => write!(f, "[q->qq]"),
            Symbol::Abit(a) if a.equals(&RatFn::var(expr::ALPHA)) => write!(f, "[alpha]"),
            Symbol::Abit(a) => write!(f, "[alpha={a}]"),
            Symbol::Zbit => write!(f, "[0]"),
            Symbol::State(n) => write!(f, "<{n}>"),
        }
    }
}

/// Coefficients over basis symbols, kept in first-seen order.
#[derive(Debug, Clone, Default)]
pub struct ResourceVector {
    terms: Vec<(Symbol, RatFn)>,
}

impl ResourceVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, coeff: RatFn, s: Symbol) -> Self {
        self.add_term(s, coeff);
        self
    }

    pub fn add_term(&mut self, s: Symbol, c: RatFn) {
        match self.terms.iter_mut().find(|(t, _)| *t == s) {
            Some((_, x)) => *x = x.add(&c),
            None => self.terms.push((s, c)),
        }
        self.terms.retain(|(_, c)| !c.is_zero());
    }

    pub fn get(&self, s: &Symbol) -> RatFn {
        self.terms.iter().find(|(t, _)| t == s).map_or_else(RatFn::zero, |(_, c)| c.clone())
    }

    pub fn terms(&self) -> &[(Symbol, RatFn)] {
        &self.terms
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.terms.iter().map(|(s, _)| s)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: &RatFn) -> Self {
        let mut r = Self::new();
        for (s, c) in &self.terms {
            r.add_term(s.clone(), c.mul(k));
        }
        r
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (s, c) in &o.terms {
            r.add_term(s.clone(), c.clone());
        }
        r
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.scaled(&RatFn::int(-1)))
    }

    pub(super) fn substitute(&self, v: &str, value: &RatFn) -> Option<Self> {
        let mut r = Self::new();
        for (s, c) in &self.terms {
            r.add_term(s.substitute(v, value)?, c.substitute(v, value)?);
        }
        Some(r)
    }

    pub fn alphas(&self) -> Vec<RatFn> {
        self.symbols().filter_map(Symbol::alpha).cloned().collect()
    }
}

impl fmt::Display for ResourceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<&(Symbol, RatFn)> = self.terms.iter().collect();
        ordered.sort_by_key(|(s, _)| if s.kind() == Kind::State { 0 } else { 1 });
        let parts: Vec<String> = ordered
            .into_iter()
            .map(|(s, c)| {
                if matches!(s, Symbol::State(_)) && c.as_constant().is_some_and(|k| k == super::poly::q(1, 1)) {
                    s.to_string()
                } else {
                    let cs = c.to_string();
                    if cs.contains(' ') || cs.starts_with('-') {
                        format!("({cs}){s}")
                    } else {
                        format!("{cs}{s}")
                    }
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone)]
pub struct ResourceInequality {
    pub label: String,
    pub lhs: ResourceVector,
    pub rhs: ResourceVector,
    pub catalytic: bool,
    pub bidirectional: bool,
    /// Opaque error subscripts for one-shot relations.
    pub tags: BTreeSet<String>,
}

impl ResourceInequality {
    pub fn new(label: &str, lhs: ResourceVector, rhs: ResourceVector, catalytic: bool, bidirectional: bool) -> Self {
        ResourceInequality { label: label.to_string(), lhs, rhs, catalytic, bidirectional, tags: BTreeSet::new() }
    }

    pub fn tagged(mut self, tags: &[&str]) -> Self {
        self.tags.extend(tags.iter().map(|t| t.to_string()));
        self
    }

    pub fn relation(&self) -> &'static str {
        match (self.bidirectional, self.catalytic) {
            (true, true) => "=(c)",
            (true, false) => "=",
            (false, true) => ">=(c)",
            (false, false) => ">=",
        }
    }

    /// Substitute a variable everywhere, including inside α-bit parameters.
    pub fn substitute(&self, v: &str, value: &RatFn) -> Result<Self, CalculusError> {
        let bad = || CalculusError::Substitution(format!("{v} := {value} in {}", self.label));
        Ok(ResourceInequality {
            lhs: self.lhs.substitute(v, value).ok_or_else(bad)?,
            rhs: self.rhs.substitute(v, value).ok_or_else(bad)?,
            ..self.clone()
        })
    }

    pub fn parse(label: &str, src: &str) -> Result<Self, CalculusError> {
        let mut p = Parser::new(src);
        let lhs = parse_side(&mut p)?;
        let (bidirectional, catalytic) = if p.eat(">=(c)") || p.eat("≥(c)") {
            (false, true)
        } else if p.eat(">=") || p.eat("≥") {
            (false, false)
        } else if p.eat("=(c)") {
            (true, true)
        } else if p.eat("=") {
            (true, false)
        } else {
            return Err(p.err("expected '>=', '>=(c)', '=' or '=(c)'"));
        };
        let rhs = parse_side(&mut p)?;
        p.skip_ws();
        if p.pos < p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(ResourceInequality::new(label, lhs, rhs, catalytic, bidirectional))
    }
}

impl fmt::Display for ResourceInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relation(), self.rhs)
    }
}

fn parse_side(p: &mut Parser<'_>) -> Result<ResourceVector, CalculusError> {
    let mut v = ResourceVector::new();
    loop {
        let (s, c) = parse_term(p)?;
        v.add_term(s, c);
        if !p.eat("+") {
            return Ok(v);
        }
    }
}

fn parse_term(p: &mut Parser<'_>) -> Result<(Symbol, RatFn), CalculusError> {
    let coeff = match p.peek() {
        Some('[') | Some('<') | Some('⟨') => RatFn::int(1),
        _ => p.product()?,
    };
    match p.peek() {
        Some('<') | Some('⟨') => {
            let open = if p.eat("<") { '<' } else { p.eat("⟨"); '⟨' };
            let close = if open == '<' { '>' } else { '⟩' };
            let end = p.rest().find(close).ok_or_else(|| p.err("unterminated state term"))?;
            let name = p.rest()[..end].trim().to_string();
            p.pos += end + close.len_utf8();
            Ok((Symbol::State(name), coeff))
        }
        Some('[') => {
            p.pos += 1;
            let end = p.rest().find(']').ok_or_else(|| p.err("unterminated resource symbol"))?;
            let body: String = p.rest()[..end].chars().filter(|c| !c.is_whitespace()).collect();
            let at = p.pos;
            p.pos += end + 1;
            let sym = match body.as_str() {
                "q->q" | "q→q" => Symbol::Qbit,
                "qq" => Symbol::Ebit,
                "c->c" | "c→c" => Symbol::Cbit,
                "q->qq" | "q→qq" => Symbol::Cobit,
                "0" => Symbol::Zbit,
                "alpha" | "α" => Symbol::Abit(RatFn::var(expr::ALPHA)),
                b => match b.strip_prefix("alpha=").or_else(|| b.strip_prefix("α=")) {
                    Some(a) => Symbol::Abit(expr::parse_expr(a)?),
                    None => {
                        p.pos = at;
                        return Err(p.err(&format!("unknown resource symbol [{b}]")));
                    }
                },
            };
            Ok((sym, coeff))
        }
        _ => Err(p.err("expected a resource symbol '[..]' or a state '<..>'")),
    }
}
