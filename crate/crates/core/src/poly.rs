//! Sparse multivariate polynomials over ℚ in the commuting symbols
//! `N`, `C_1, C_2, …`, `p_1, p_2, …` and `K_1, K_2, …`.
//!
//! Coefficients are exact rationals ([`num::BigRational`]); there is no
//! floating point anywhere. Invariants maintained by construction:
//! monomials keep their factors sorted by the fixed generator order
//! `N < C_1 < C_2 < … < p_1 < p_2 < … < K_1 < K_2 < …`, and a polynomial
//! never stores a zero coefficient. Term maps are ordered, so printing,
//! hashing and serialization are deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the library.
pub type Rat = BigRational;

/// Convenience constructors for the scalar type.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// A single commuting symbol.
///
/// The derived `Ord` realizes the canonical generator order
/// `N < C(1) < C(2) < … < P(1) < … < K(1) < …` used for monomial
/// normalization, printing and memo keys.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    /// The matrix size of gl_N, kept symbolic.
    N,
    /// The Casimir generator C_k (k ≥ 1).
    C(u32),
    /// The shifted power sum p_k (k ≥ 1).
    P(u32),
    /// The formal chord-diagram symbol K_k (k ≥ 1), used on the Hopf side.
    K(u32),
}

impl Generator {
    /// Canonical ASCII name: `N`, `C2`, `p3`, `K4`.
    pub fn name(&self) -> String {
        match self {
            Generator::N => "N".to_string(),
            Generator::C(k) => format!("C{k}"),
            Generator::P(k) => format!("p{k}"),
            Generator::K(k) => format!("K{k}"),
        }
    }

    /// LaTeX form: `N`, `C_{2}`, `p_{3}`, `K_{4}`.
    pub fn latex(&self) -> String {
        match self {
            Generator::N => "N".to_string(),
            Generator::C(k) => format!("C_{{{k}}}"),
            Generator::P(k) => format!("p_{{{k}}}"),
            Generator::K(k) => format!("K_{{{k}}}"),
        }
    }

    /// Parses a generator name. Accepts an optional underscore before the
    /// index (`C2` and `C_2` both work) and requires the index to be ≥ 1.
    pub fn parse_name(s: &str) -> Option<Generator> {
        if s == "N" {
            return Some(Generator::N);
        }
        let (head, tail) = s.split_at(1);
        let tail = tail.strip_prefix('_').unwrap_or(tail);
        if tail.is_empty() || tail.chars().any(|c| !c.is_ascii_digit()) {
            return None;
        }
        let k: u32 = tail.parse().ok()?;
        if k == 0 {
            return None;
        }
        match head {
            "C" => Some(Generator::C(k)),
            "p" | "P" => Some(Generator::P(k)),
            "K" => Some(Generator::K(k)),
            _ => None,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A product of generator powers, e.g. `N·C₂²`.
///
/// Factors are stored sorted by generator with strictly positive exponents;
/// the empty product is the unit monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    /// The empty product.
    pub fn unit() -> Monomial {
        Monomial::default()
    }

    /// A single generator to the first power.
    pub fn generator(g: Generator) -> Monomial {
        Monomial {
            factors: vec![(g, 1)],
        }
    }

    /// Builds a monomial from arbitrary (generator, exponent) pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_factors(pairs: impl IntoIterator<Item = (Generator, u32)>) -> Monomial {
        let mut merged: BTreeMap<Generator, u32> = BTreeMap::new();
        for (g, e) in pairs {
            if e > 0 {
                *merged.entry(g).or_insert(0) += e;
            }
        }
        Monomial {
            factors: merged.into_iter().collect(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, g: Generator) -> u32 {
        self.factors
            .iter()
            .find(|(h, _)| *h == g)
            .map_or(0, |(_, e)| *e)
    }

    /// Factors in ascending generator order.
    pub fn iter(&self) -> impl Iterator<Item = (Generator, u32)> + '_ {
        self.factors.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(self.iter().chain(other.iter()))
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial::from_factors(self.iter().map(|(g, x)| (g, x * e)))
    }

    /// Weighted Casimir degree: each C_k factor counts k per power.
    /// Other generators contribute nothing.
    pub fn weighted_casimir_degree(&self) -> u64 {
        self.iter()
            .map(|(g, e)| match g {
                Generator::C(k) => k as u64 * e as u64,
                _ => 0,
            })
            .sum()
    }

    fn fmt_with(&self, name: fn(&Generator) -> String, sep: &str) -> String {
        self.factors
            .iter()
            .map(|(g, e)| {
                if *e == 1 {
                    name(g)
                } else if sep.is_empty() {
                    format!("{}^{{{}}}", name(g), e)
                } else {
                    format!("{}^{}", name(g), e)
                }
            })
            .collect::<Vec<_>>()
            .join(if sep.is_empty() { " " } else { sep })
    }
}

impl Ord for Monomial {
    /// Lexicographic comparison of exponent vectors over the ascending
    /// generator order, with absent generators reading as exponent 0.
    /// The first generator where the exponents differ decides.
    fn cmp(&self, other: &Monomial) -> Ordering {
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        let (mut x, mut y) = (a.next(), b.next());
        loop {
            match (x, y) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ga, ea)), Some(&(gb, eb))) => {
                    if ga < gb {
                        return Ordering::Greater;
                    }
                    if gb < ga {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    x = a.next();
                    y = b.next();
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            f.write_str("1")
        } else {
            f.write_str(&self.fmt_with(Generator::name, "*"))
        }
    }
}

/// A sparse polynomial: an ordered term map monomial → nonzero rational.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rat::one())
    }

    pub fn int(n: i64) -> Polynomial {
        Polynomial::constant(rat_int(n))
    }

    pub fn constant(c: Rat) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::unit(), c);
        p
    }

    pub fn generator(g: Generator) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::generator(g), Rat::one());
        p
    }

    pub fn monomial(m: Monomial) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(m, Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds `c·m`, removing the entry if the total cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in other.iter() {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Polynomial) {
        for (m, c) in other.iter() {
            self.add_term(m.clone(), -c.clone());
        }
    }

    /// Accumulates `a·b` into `self` without building the intermediate sum.
    pub fn add_mul_assign(&mut self, a: &Polynomial, b: &Polynomial) {
        for (ma, ca) in a.iter() {
            for (mb, cb) in b.iter() {
                self.add_term(ma.mul(mb), ca * cb);
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces each mapped generator by the given polynomial and expands.
    /// Generators absent from the map stay themselves.
    pub fn substitute(&self, map: &BTreeMap<Generator, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        // Powers of the replacement polynomials are shared across terms.
        let mut pow_cache: BTreeMap<(Generator, u32), Polynomial> = BTreeMap::new();
        for (m, c) in self.iter() {
            let mut term = Polynomial::constant(c.clone());
            for (g, e) in m.iter() {
                match map.get(&g) {
                    None => term = &term * &Polynomial::monomial(Monomial::generator(g).pow(e)),
                    Some(repl) => {
                        let p = pow_cache
                            .entry((g, e))
                            .or_insert_with(|| repl.pow(e))
                            .clone();
                        term = &term * &p;
                    }
                }
            }
            out.add_assign(&term);
        }
        out
    }

    /// Evaluates at a rational point. Every generator that actually occurs
    /// must be present in `values`.
    pub fn eval(&self, values: &BTreeMap<Generator, Rat>) -> Result<Rat> {
        let mut total = Rat::zero();
        for (m, c) in self.iter() {
            let mut prod = c.clone();
            for (g, e) in m.iter() {
                let v = values
                    .get(&g)
                    .ok_or_else(|| Error::MissingGenerator(g.name()))?;
                for _ in 0..e {
                    prod *= v;
                }
            }
            total += prod;
        }
        Ok(total)
    }

    /// The set of generators that occur with nonzero exponent.
    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(g, _)| g))
            .collect()
    }

    /// True when every coefficient has denominator 1.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Maximal weighted Casimir degree over all terms (0 for the zero
    /// polynomial).
    pub fn weighted_casimir_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(Monomial::weighted_casimir_degree)
            .max()
            .unwrap_or(0)
    }

    /// The homogeneous part of maximal weighted Casimir degree.
    pub fn leading_weighted_part(&self) -> Polynomial {
        let top = self.weighted_casimir_degree();
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weighted_casimir_degree() == top)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms in descending monomial order (leading term first). This is the
    /// order used by `Display`, the LaTeX emitter and the JSON emitter.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter().rev()
    }

    /// JSON form: `{"terms":[{"coeff":"num/den","mono":{"N":1,"C2":2}}]}`
    /// with terms in descending canonical order and monomial keys in
    /// ascending generator order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms_desc()
            .map(|(m, c)| {
                let mut mono = Map::new();
                for (g, e) in m.iter() {
                    mono.insert(g.name(), json!(e));
                }
                json!({
                    "coeff": format!("{}/{}", c.numer(), c.denom()),
                    "mono": Value::Object(mono),
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    /// Parses the JSON form produced by [`Polynomial::to_json`]. Term order
    /// in the input is irrelevant; repeated monomials accumulate.
    pub fn from_json(v: &Value) -> Result<Polynomial> {
        let bad = |msg: &str| Error::CacheFormat(format!("polynomial JSON: {msg}"));
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"terms\" array"))?;
        let mut out = Polynomial::zero();
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("term without string \"coeff\""))?;
            let c = parse_rat(coeff).ok_or_else(|| bad("unreadable coefficient"))?;
            let mono = t
                .get("mono")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("term without \"mono\" object"))?;
            let mut factors = Vec::new();
            for (name, e) in mono {
                let g = Generator::parse_name(name)
                    .ok_or_else(|| bad(&format!("unknown generator {name:?}")))?;
                let e = e
                    .as_u64()
                    .filter(|e| *e > 0 && *e <= u32::MAX as u64)
                    .ok_or_else(|| bad("exponent must be a positive integer"))?;
                factors.push((g, e as u32));
            }
            out.add_term(Monomial::from_factors(factors), c);
        }
        Ok(out)
    }

    /// LaTeX rendering, leading term first.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms_desc().enumerate() {
            let neg = c.is_negative();
            let abs: Rat = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_str = if abs.is_integer() {
                format!("{}", abs.numer())
            } else {
                format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
            };
            if m.is_unit() {
                out.push_str(&coeff_str);
            } else {
                if !abs.is_one() {
                    out.push_str(&coeff_str);
                    out.push(' ');
                }
                out.push_str(&m.fmt_with(Generator::latex, ""));
            }
        }
        out
    }
}

/// Parses `a`, `-a`, or `a/b` as an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().ok()?;
    let den: BigInt = den.trim().parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms_desc().enumerate() {
            let neg = c.is_negative();
            let abs: Rat = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        out.add_mul_assign(self, rhs);
        out
    }
}
