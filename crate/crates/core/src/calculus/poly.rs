//! Exact multivariate polynomials and rational functions over `BigRational`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Variables known to be non-negative; every other symbol has unknown sign.
pub const NONNEGATIVE: &[&str] = &["alpha", "eps", "I(A:R)", "I(A:B)", "Hmax(A)", "Hmax(A)-Hmin(A|R)", ALPHA_ODDS];

/// `alpha = t/(1+t)` maps `t >= 0` onto `0 <= alpha < 1`, so positivity in `t`
/// certifies positivity on the whole alpha range by continuity.
const ALPHA_ODDS: &str = "alpha/(1-alpha)";

/// Power product, sorted by variable name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    fn exp(&self, v: &str) -> u32 {
        self.0.iter().find(|(n, _)| n == v).map_or(0, |(_, e)| *e)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut m: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &o.0 {
            *m.entry(n.clone()).or_insert(0) += e;
        }
        Monomial(m.into_iter().collect())
    }

    /// `self / o` when every exponent of `o` fits.
    fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut m: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &o.0 {
            let have = m.get_mut(n)?;
            if *have < *e {
                return None;
            }
            *have -= e;
        }
        Some(Monomial(m.into_iter().filter(|(_, e)| *e > 0).collect()))
    }

    fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(n, e)| {
                    let k = (*e).min(o.exp(n));
                    (k > 0).then(|| (n.clone(), k))
                })
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(n, _)| n.as_str())
    }
}

// Lex order: the alphabetically first variable dominates.
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        let names: BTreeSet<&str> = self.vars().chain(o.vars()).collect();
        for n in names {
            match self.exp(n).cmp(&o.exp(n)) {
                Ordering::Equal => {}
                c => return c,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, e)| {
                let n = if n.contains('-') { format!("({n})") } else { n.clone() };
                if *e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(BTreeMap<Monomial, Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::default(), c);
        }
        Poly(m)
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Monomial::var(name), Q::one());
        Poly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => self.0.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.0.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        let e = self.0.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * s)).collect())
    }

    fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        Poly(self.0.iter().map(|(k, v)| (k.mul(m), v * c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &o.0 {
            r = r.add(&self.mul_term(m, c));
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(Q::one()), |acc, _| acc.mul(self))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut quo = Poly::zero();
        while let Some((rm, rc)) = r.leading() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            r = r.sub(&d.mul_term(&m, &c));
            quo.add_term(m, c);
        }
        Some(quo)
    }

    /// Greatest common monomial factor of all terms.
    fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.0.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |g, m| g.gcd(m)))
    }

    fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly(self.0.iter().map(|(k, c)| (k.div(m).expect("divides"), c.clone())).collect())
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.0.keys().flat_map(|m| m.vars().map(str::to_string).collect::<Vec<_>>()).collect()
    }

    fn degree_in(&self, v: &str) -> u32 {
        self.0.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// `Some(true)` if certainly `>= 0` when every non-negative variable is
    /// `>= 0`, `Some(false)` if certainly `<= 0`, `None` otherwise.
    pub fn sign_hint(&self) -> Option<bool> {
        let all_nonneg_vars = self.0.keys().all(|m| m.vars().all(|v| NONNEGATIVE.contains(&v)));
        if !all_nonneg_vars {
            return None;
        }
        if self.0.values().all(|c| !c.is_negative()) {
            Some(true)
        } else if self.0.values().all(|c| !c.is_positive()) {
            Some(false)
        } else {
            None
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.0.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if m.is_one() {
                fmt_q(&a)
            } else if a.is_one() {
                m.to_string()
            } else if a.numer().is_one() {
                format!("{m}/{}", a.denom())
            } else if a.denom().is_one() {
                format!("{}*{m}", a.numer())
            } else {
                format!("{}*{m}/{}", a.numer(), a.denom())
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `num / den` with `den != 0`.
#[derive(Debug, Clone)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::constant(Q::one()) }
    }

    pub fn constant(c: Q) -> Self {
        RatFn { num: Poly::constant(c), den: Poly::constant(Q::one()) }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n, 1))
    }

    pub fn var(name: &str) -> Self {
        RatFn { num: Poly::var(name), den: Poly::constant(Q::one()) }
    }

    pub fn from_parts(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(RatFn { num, den }.normalized())
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.num.monomial_content(), self.den.monomial_content()) {
            let g = a.gcd(&b);
            if !g.is_one() {
                self.num = self.num.div_monomial(&g);
                self.den = self.den.div_monomial(&g);
            }
        }
        if let Some(quo) = self.num.div_exact(&self.den) {
            return RatFn { num: quo, den: Poly::constant(Q::one()) };
        }
        if let Some(quo) = self.den.div_exact(&self.num) {
            self.num = Poly::constant(Q::one());
            self.den = quo;
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        let inv = Q::one() / lc;
        RatFn { num: self.num.scale(&inv), den: self.den.scale(&inv) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Q> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn { num: self.num.add(&o.num), den: self.den.clone() }.normalized();
        }
        RatFn { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn div(&self, o: &RatFn) -> Option<RatFn> {
        if o.is_zero() {
            return None;
        }
        Some(RatFn { num: self.num.mul(&o.den), den: self.den.mul(&o.num) }.normalized())
    }

    pub fn pow(&self, k: u32) -> RatFn {
        RatFn { num: self.num.pow(k), den: self.den.pow(k) }.normalized()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    /// Replace variable `v` by `value`; `None` if that zeroes the denominator.
    pub fn substitute(&self, v: &str, value: &RatFn) -> Option<RatFn> {
        let sub_poly = |p: &Poly| -> RatFn {
            let mut acc = RatFn::zero();
            for (m, c) in &p.0 {
                let k = m.exp(v);
                let rest = Monomial(m.0.iter().filter(|(n, _)| n != v).cloned().collect());
                let mut t = Poly::zero();
                t.add_term(rest, c.clone());
                let base = RatFn { num: t, den: Poly::constant(Q::one()) };
                acc = acc.add(&base.mul(&value.pow(k)));
            }
            acc
        };
        if self.num.degree_in(v) == 0 && self.den.degree_in(v) == 0 {
            return Some(self.clone());
        }
        sub_poly(&self.num).div(&sub_poly(&self.den))
    }

    /// Sign hint as in [`Poly::sign_hint`], for the quotient.
    pub fn sign_hint(&self) -> Option<bool> {
        if self.is_zero() {
            return Some(true);
        }
        if let Some(c) = self.as_constant() {
            return Some(!c.is_negative());
        }
        let direct = match (self.num.sign_hint(), self.den.sign_hint()) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        if direct.is_some() || !self.vars().contains("alpha") {
            return direct;
        }
        let t = RatFn::var(ALPHA_ODDS);
        let alpha = t.div(&RatFn::int(1).add(&t))?;
        let r = self.substitute("alpha", &alpha)?;
        match (r.num.sign_hint(), r.den.sign_hint()) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }

    pub fn equals(&self, o: &RatFn) -> bool {
        self.num.mul(&o.den).sub(&o.num.mul(&self.den)).is_zero()
    }
}

impl PartialEq for RatFn {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.0.len() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        match self.den.as_constant() {
            Some(c) if c.is_one() => write!(f, "{}", self.num),
            _ => write!(f, "{}/{}", wrap(&self.num), wrap(&self.den)),
        }
    }
}
