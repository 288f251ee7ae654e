//! Brute-force ground truth in U(gl_N) for concrete small N.
//!
//! Elements are kept in PBW normal form with respect to the fixed generator
//! order *lowering < diagonal < raising* (each group ordered by (row, col)).
//! That choice makes the Harish–Chandra projection literally "drop every
//! monomial containing a non-diagonal unit": a monomial with a lowering unit
//! starts with one, a monomial whose only off-diagonal units are raising ends
//! with one.
//!
//! Products are normalized by repeatedly rewriting adjacent out-of-order
//! pairs with E_ab·E_cd = E_cd·E_ab + δ_bc·E_ad − δ_da·E_cb; each rewrite
//! either removes an inversion or shortens the word, so the process
//! terminates, and intermediate words are memoized. A configurable budget on
//! distinct memoized words guards against runaway inputs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{One, Signed, Zero};

use crate::diagrams::Permutation;
use crate::error::{Error, Result};
use crate::hc::WeightVector;
use crate::poly::{rat_int, Generator, Polynomial, Rat};

/// The matrix unit E_{row,col}, 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MatrixUnit {
    pub row: u8,
    pub col: u8,
}

impl MatrixUnit {
    pub fn new(row: u8, col: u8) -> MatrixUnit {
        MatrixUnit { row, col }
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }

    /// 0 = lowering (row > col), 1 = diagonal, 2 = raising (row < col).
    fn class(&self) -> u8 {
        match self.row.cmp(&self.col) {
            Ordering::Greater => 0,
            Ordering::Equal => 1,
            Ordering::Less => 2,
        }
    }
}

impl Ord for MatrixUnit {
    fn cmp(&self, other: &MatrixUnit) -> Ordering {
        (self.class(), self.row, self.col).cmp(&(other.class(), other.row, other.col))
    }
}

impl PartialOrd for MatrixUnit {
    fn partial_cmp(&self, other: &MatrixUnit) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MatrixUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.row <= 9 && self.col <= 9 {
            write!(f, "E{}{}", self.row, self.col)
        } else {
            write!(f, "E{}_{}", self.row, self.col)
        }
    }
}

/// A PBW basis element: units strictly increasing in the fixed order, with
/// positive exponents. The empty product is the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PbwMonomial {
    factors: Vec<(MatrixUnit, u32)>,
}

impl PbwMonomial {
    pub fn unit() -> PbwMonomial {
        PbwMonomial::default()
    }

    /// Run-length encodes a sorted word. Panics if the word is not sorted —
    /// only the straightener builds monomials.
    fn from_sorted_word(word: &[MatrixUnit]) -> PbwMonomial {
        let mut factors: Vec<(MatrixUnit, u32)> = Vec::new();
        for &u in word {
            match factors.last_mut() {
                Some((last, e)) if *last == u => *e += 1,
                Some((last, _)) => {
                    assert!(*last < u, "word not in PBW order");
                    factors.push((u, 1));
                }
                None => factors.push((u, 1)),
            }
        }
        PbwMonomial { factors }
    }

    pub fn iter(&self) -> impl Iterator<Item = (MatrixUnit, u32)> + '_ {
        self.factors.iter().copied()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    fn word(&self) -> Vec<MatrixUnit> {
        let mut w = Vec::new();
        for (u, e) in self.iter() {
            w.extend(std::iter::repeat(u).take(e as usize));
        }
        w
    }

    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|(u, _)| u.is_diagonal())
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let body: Vec<String> = self
            .factors
            .iter()
            .map(|(u, e)| {
                if *e == 1 {
                    u.to_string()
                } else {
                    format!("{u}^{e}")
                }
            })
            .collect();
        f.write_str(&body.join("*"))
    }
}

/// An element of U(gl_n) for one concrete n: a finite linear combination of
/// PBW monomials with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UElement {
    n: u8,
    terms: BTreeMap<PbwMonomial, Rat>,
}

impl UElement {
    pub fn zero(n: u8) -> UElement {
        UElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: u8, c: Rat) -> UElement {
        let mut e = UElement::zero(n);
        e.add_term(PbwMonomial::unit(), c);
        e
    }

    pub fn unit(n: u8, u: MatrixUnit) -> Result<UElement> {
        if u.row == 0 || u.col == 0 || u.row > n || u.col > n {
            return Err(Error::UnitOutOfRange {
                row: u.row,
                col: u.col,
                n,
            });
        }
        let mut e = UElement::zero(n);
        e.add_term(PbwMonomial::from_sorted_word(&[u]), Rat::one());
        Ok(e)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PbwMonomial, &Rat)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: PbwMonomial, c: Rat) {
        add_term_map(&mut self.terms, m, c);
    }

    fn check_same_n(&self, other: &UElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::MatrixSizeMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &UElement) -> Result<UElement> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &UElement) -> Result<UElement> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> UElement {
        if c.is_zero() {
            return UElement::zero(self.n);
        }
        UElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    /// Keeps exactly the monomials made of diagonal units. With the fixed
    /// PBW order this is the Harish–Chandra projection onto U(h).
    pub fn cartan_part(&self) -> UElement {
        UElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.is_diagonal())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates a purely diagonal element at E_ii = λ_i.
    pub fn eval_cartan(&self, lambda: &WeightVector) -> Result<Rat> {
        if lambda.len() != self.n as usize {
            return Err(Error::WeightLength {
                need: self.n as usize,
                found: lambda.len(),
            });
        }
        let mut total = Rat::zero();
        for (m, c) in self.iter() {
            let mut prod = c.clone();
            for (u, e) in m.iter() {
                if !u.is_diagonal() {
                    return Err(Error::NonCartanFactor(u.to_string()));
                }
                for _ in 0..e {
                    prod *= lambda.entry(u.row as usize);
                }
            }
            total += prod;
        }
        Ok(total)
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.iter().enumerate() {
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

type TermMap = BTreeMap<PbwMonomial, Rat>;

/// Shared normalization state: memoized straightenings of words, plus the
/// resource budget. One straightener is used per top-level operation so the
/// memo table is shared across all the words it generates.
pub struct Straightener {
    cache: HashMap<Vec<MatrixUnit>, TermMap>,
    budget: Option<usize>,
}

impl Straightener {
    pub fn new(budget: Option<usize>) -> Straightener {
        Straightener {
            cache: HashMap::new(),
            budget,
        }
    }

    /// Number of distinct words normalized so far.
    pub fn words_seen(&self) -> usize {
        self.cache.len()
    }

    fn normalize(&mut self, word: &[MatrixUnit]) -> Result<TermMap> {
        if let Some(hit) = self.cache.get(word) {
            return Ok(hit.clone());
        }
        if let Some(limit) = self.budget {
            if self.cache.len() >= limit {
                return Err(Error::ResourceLimit { limit });
            }
        }
        let inversion = (0..word.len().saturating_sub(1)).find(|&i| word[i] > word[i + 1]);
        let result = match inversion {
            None => {
                let mut map = TermMap::new();
                map.insert(PbwMonomial::from_sorted_word(word), Rat::one());
                map
            }
            Some(i) => {
                let x = word[i];
                let y = word[i + 1];
                let mut swapped = word.to_vec();
                swapped.swap(i, i + 1);
                let mut acc = self.normalize(&swapped)?;
                if x.col == y.row {
                    let mut merged = word.to_vec();
                    merged[i] = MatrixUnit::new(x.row, y.col);
                    merged.remove(i + 1);
                    for (m, c) in self.normalize(&merged)? {
                        add_term_map(&mut acc, m, c);
                    }
                }
                if y.col == x.row {
                    let mut merged = word.to_vec();
                    merged[i] = MatrixUnit::new(y.row, x.col);
                    merged.remove(i + 1);
                    for (m, c) in self.normalize(&merged)? {
                        add_term_map(&mut acc, m, -c);
                    }
                }
                acc
            }
        };
        self.cache.insert(word.to_vec(), result.clone());
        Ok(result)
    }

    /// The PBW-normalized product of two elements.
    pub fn mul(&mut self, a: &UElement, b: &UElement) -> Result<UElement> {
        a.check_same_n(b)?;
        let mut out = UElement::zero(a.n);
        for (ma, ca) in a.iter() {
            let wa = ma.word();
            for (mb, cb) in b.iter() {
                let mut word = wa.clone();
                word.extend(mb.word());
                let scale = ca * cb;
                for (m, c) in self.normalize(&word)? {
                    out.add_term(m, c * &scale);
                }
            }
        }
        Ok(out)
    }
}

fn add_term_map(map: &mut TermMap, m: PbwMonomial, c: Rat) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(m.clone()).or_insert_with(Rat::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&m);
    }
}

/// Convenience wrapper: one product with a fresh straightener.
pub fn u_mul(a: &UElement, b: &UElement) -> Result<UElement> {
    Straightener::new(None).mul(a, b)
}

/// The direct definition of the weight of σ ∈ S_m in U(gl_n): the sum over
/// all index tuples (i_1 … i_m) ∈ {1..n}^m of E_{i_1 i_σ(1)}⋯E_{i_m i_σ(m)},
/// PBW-normalized.
pub fn w_direct(p: &Permutation, n: u8, budget: Option<usize>) -> Result<UElement> {
    let mut st = Straightener::new(budget);
    w_direct_with(&mut st, p, n)
}

fn w_direct_with(st: &mut Straightener, p: &Permutation, n: u8) -> Result<UElement> {
    let m = p.size();
    let mut out = UElement::zero(n);
    let mut tuple = vec![1u8; m];
    loop {
        let word: Vec<MatrixUnit> = (1..=m)
            .map(|j| MatrixUnit::new(tuple[j - 1], tuple[(p.image(j as u32) - 1) as usize]))
            .collect();
        for (mono, c) in st.normalize(&word)? {
            out.add_term(mono, c);
        }
        // Odometer over {1..n}^m.
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            if tuple[pos - 1] < n {
                tuple[pos - 1] += 1;
                break;
            }
            tuple[pos - 1] = 1;
            pos -= 1;
        }
    }
}

/// The k-th Casimir element of gl_n: Σ E_{i_1 i_2} E_{i_2 i_3} ⋯ E_{i_k i_1}.
/// Identical to `w_direct` of the standard ascending k-cycle.
pub fn casimir_element(k: u32, n: u8, budget: Option<usize>) -> Result<UElement> {
    let cycle = Permutation::from_cycles(&[(1..=k).collect()], k as usize)
        .expect("ascending cycle is a permutation");
    w_direct(&cycle, n, budget)
}

/// Expands a weight polynomial in {N, C_k} inside U(gl_n): N becomes the
/// scalar n, C_k the Casimir element. Power-sum or diagram symbols are
/// rejected — they do not denote elements of U(gl_n).
pub fn expand_polynomial(p: &Polynomial, n: u8, budget: Option<usize>) -> Result<UElement> {
    let mut st = Straightener::new(budget);
    let mut casimirs: HashMap<u32, UElement> = HashMap::new();
    let mut powers: HashMap<(u32, u32), UElement> = HashMap::new();
    let mut out = UElement::zero(n);
    for (mono, coeff) in p.iter() {
        let mut scalar = coeff.clone();
        let mut factor = UElement::scalar(n, Rat::one());
        for (g, e) in mono.iter() {
            match g {
                Generator::N => {
                    for _ in 0..e {
                        scalar *= rat_int(n as i64);
                    }
                }
                Generator::C(k) => {
                    if !casimirs.contains_key(&k) {
                        let cycle = Permutation::from_cycles(&[(1..=k).collect()], k as usize)
                            .expect("ascending cycle is a permutation");
                        let value = w_direct_with(&mut st, &cycle, n)?;
                        casimirs.insert(k, value);
                    }
                    if !powers.contains_key(&(k, e)) {
                        let base = casimirs[&k].clone();
                        let mut acc = UElement::scalar(n, Rat::one());
                        for _ in 0..e {
                            acc = st.mul(&acc, &base)?;
                        }
                        powers.insert((k, e), acc);
                    }
                    factor = st.mul(&factor, &powers[&(k, e)])?;
                }
                other => {
                    return Err(Error::UnsupportedGenerator {
                        gen: other.name(),
                        context: "expansion in U(gl_n)",
                    })
                }
            }
        }
        let scaled = factor.scale(&scalar);
        out = out.add(&scaled)?;
    }
    Ok(out)
}

/// Does `a` commute with every matrix unit of gl_n?
pub fn is_central(a: &UElement, budget: Option<usize>) -> Result<bool> {
    let mut st = Straightener::new(budget);
    for row in 1..=a.n {
        for col in 1..=a.n {
            let e = UElement::unit(a.n, MatrixUnit::new(row, col))?;
            let left = st.mul(a, &e)?;
            let right = st.mul(&e, a)?;
            if left != right {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn unit(n: u8, r: u8, c: u8) -> UElement {
        UElement::unit(n, MatrixUnit::new(r, c)).unwrap()
    }

    #[test]
    fn pbw_order_puts_lowering_first() {
        let lowering = MatrixUnit::new(2, 1);
        let diagonal = MatrixUnit::new(1, 1);
        let raising = MatrixUnit::new(1, 2);
        assert!(lowering < diagonal);
        assert!(diagonal < raising);
        assert!(MatrixUnit::new(1, 1) < MatrixUnit::new(2, 2));
    }

    #[test]
    fn single_commutator() {
        // E12·E21 = E21·E12 + E11 − E22 in U(gl_2).
        let prod = u_mul(&unit(2, 1, 2), &unit(2, 2, 1)).unwrap();
        let expected = u_mul(&unit(2, 2, 1), &unit(2, 1, 2))
            .unwrap()
            .add(&unit(2, 1, 1))
            .unwrap()
            .sub(&unit(2, 2, 2))
            .unwrap();
        assert_eq!(prod, expected);
        assert_eq!(prod.to_string(), "E21*E12 + E11 - E22");
    }

    #[test]
    fn commutators_match_the_relation() {
        // xy − yx = δ_bc E_ad − δ_da E_cb for all pairs in gl_3.
        let n = 3u8;
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    for d in 1..=n {
                        let x = unit(n, a, b);
                        let y = unit(n, c, d);
                        let lhs = u_mul(&x, &y).unwrap().sub(&u_mul(&y, &x).unwrap()).unwrap();
                        let mut rhs = UElement::zero(n);
                        if b == c {
                            rhs = rhs.add(&unit(n, a, d)).unwrap();
                        }
                        if d == a {
                            rhs = rhs.sub(&unit(n, c, b)).unwrap();
                        }
                        assert_eq!(lhs, rhs, "[E{a}{b}, E{c}{d}]");
                    }
                }
            }
        }
    }

    #[test]
    fn multiplication_is_associative() {
        // All triples of matrix units in gl_2.
        let units: Vec<UElement> = (1..=2)
            .flat_map(|r| (1..=2).map(move |c| (r, c)))
            .map(|(r, c)| unit(2, r, c))
            .collect();
        for x in &units {
            for y in &units {
                for z in &units {
                    let left = u_mul(&u_mul(x, y).unwrap(), z).unwrap();
                    let right = u_mul(x, &u_mul(y, z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn casimir_elements() {
        // C_1 = E11 + E22.
        let c1 = casimir_element(1, 2, None).unwrap();
        let expected = unit(2, 1, 1).add(&unit(2, 2, 2)).unwrap();
        assert_eq!(c1, expected);

        // C_2 in gl_2, normal-ordered by hand:
        // E11² + E22² + 2·E21E12 + E11 − E22.
        let c2 = casimir_element(2, 2, None).unwrap();
        let mut expected = u_mul(&unit(2, 1, 1), &unit(2, 1, 1)).unwrap();
        expected = expected
            .add(&u_mul(&unit(2, 2, 2), &unit(2, 2, 2)).unwrap())
            .unwrap();
        expected = expected
            .add(&u_mul(&unit(2, 2, 1), &unit(2, 1, 2)).unwrap().scale(&rat_int(2)))
            .unwrap();
        expected = expected.add(&unit(2, 1, 1)).unwrap();
        expected = expected.sub(&unit(2, 2, 2)).unwrap();
        assert_eq!(c2, expected);
    }

    #[test]
    fn casimir_equals_direct_weight_of_ascending_cycle() {
        for n in [2u8, 3] {
            for k in 1..=3u32 {
                let cycle =
                    Permutation::from_cycles(&[(1..=k).collect()], k as usize).unwrap();
                assert_eq!(
                    casimir_element(k, n, None).unwrap(),
                    w_direct(&cycle, n, None).unwrap()
                );
            }
        }
    }

    #[test]
    fn cartan_projection_of_c2() {
        let c2 = casimir_element(2, 2, None).unwrap();
        let diag = c2.cartan_part();
        // E11² + E22² + E11 − E22.
        let mut expected = u_mul(&unit(2, 1, 1), &unit(2, 1, 1)).unwrap();
        expected = expected
            .add(&u_mul(&unit(2, 2, 2), &unit(2, 2, 2)).unwrap())
            .unwrap();
        expected = expected.add(&unit(2, 1, 1)).unwrap();
        expected = expected.sub(&unit(2, 2, 2)).unwrap();
        assert_eq!(diag, expected);

        let lambda = WeightVector::from_ints(&[1, 0]);
        assert_eq!(diag.eval_cartan(&lambda).unwrap(), rat_int(2));
    }

    #[test]
    fn worked_example_matches_engine_polynomial() {
        // w((1 3 2)) = C3 + C1² − N·C2, checked inside U(gl_2).
        let sigma = Permutation::from_images(vec![3, 1, 2]).unwrap();
        let direct = w_direct(&sigma, 2, None).unwrap();
        let poly = parse_polynomial("C3 + C1^2 - N*C2").unwrap();
        let expanded = expand_polynomial(&poly, 2, None).unwrap();
        assert_eq!(direct, expanded);
    }

    #[test]
    fn centrality() {
        let c2 = casimir_element(2, 2, None).unwrap();
        assert!(is_central(&c2, None).unwrap());
        assert!(!is_central(&unit(2, 1, 2), None).unwrap());

        let sigma = Permutation::from_images(vec![2, 1, 3]).unwrap();
        let w = w_direct(&sigma, 2, None).unwrap();
        assert!(is_central(&w, None).unwrap());
    }

    #[test]
    fn budget_guard_trips() {
        let sigma = Permutation::from_images(vec![2, 3, 4, 1]).unwrap();
        let result = w_direct(&sigma, 3, Some(5));
        assert!(matches!(result, Err(Error::ResourceLimit { limit: 5 })));
    }

    #[test]
    fn eval_cartan_errors() {
        let c2 = casimir_element(2, 2, None).unwrap();
        let lambda = WeightVector::from_ints(&[1, 0, 0]);
        assert!(matches!(
            c2.cartan_part().eval_cartan(&lambda),
            Err(Error::WeightLength { .. })
        ));
        let lambda2 = WeightVector::from_ints(&[1, 0]);
        assert!(matches!(
            c2.eval_cartan(&lambda2),
            Err(Error::NonCartanFactor(_))
        ));
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = unit(2, 1, 1);
        let b = unit(3, 1, 1);
        assert!(matches!(
            u_mul(&a, &b),
            Err(Error::MatrixSizeMismatch(2, 3))
        ));
    }

    #[test]
    fn expand_rejects_foreign_generators() {
        let p = parse_polynomial("p2").unwrap();
        assert!(matches!(
            expand_polynomial(&p, 2, None),
            Err(Error::UnsupportedGenerator { .. })
        ));
    }
}
