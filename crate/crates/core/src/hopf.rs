//! The Hopf-algebra side: coproduct on chord diagrams, projection onto
//! primitive elements, and the reduced weight w̄ = w ∘ π.
//!
//! The coproduct of a diagram D splits its chord set every possible way,
//! Δ(D) = Σ_J D_J ⊗ D_{J̄}. The projection onto primitives is
//!
//! ```text
//! π(D) = Σ over set partitions of the chords into i parts
//!        (−1)^{i−1} (i−1)! · D_1 ⋯ D_i
//! ```
//!
//! (the i = 1 partition contributes D itself). For the complete diagrams K_n
//! every subdiagram on j chords is again K_j, which gives the exponential
//! generating identity Σ π(K_n) xⁿ/n! = log(1 + Σ K_n xⁿ/n!); both routes are
//! computed here and tested against each other.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::diagrams::ChordDiagram;
use crate::engine::{wgl, MemoCache};
use crate::error::{Error, Result};
use crate::poly::{rat_int, Generator, Monomial, Polynomial, Rat};
use crate::series::PowerSeries;

/// An integer linear combination of formal products (multisets) of chord
/// diagrams — the ambient space of the primitive projection.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiagramCombination {
    /// Multisets are kept sorted so equal products collide reliably.
    terms: BTreeMap<Vec<ChordDiagram>, i64>,
}

impl DiagramCombination {
    pub fn zero() -> DiagramCombination {
        DiagramCombination::default()
    }

    /// A single diagram with coefficient 1.
    pub fn single(d: ChordDiagram) -> DiagramCombination {
        let mut out = DiagramCombination::zero();
        out.add_term(vec![d], 1);
        out
    }

    pub fn add_term(&mut self, mut multiset: Vec<ChordDiagram>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        multiset.sort();
        match self.terms.entry(multiset) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<ChordDiagram>, &i64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Rewrites a combination whose diagrams are all complete (equal to K_j
    /// for their chord count) as a polynomial in the symbols K_j.
    pub fn as_k_polynomial(&self) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (multiset, coeff) in self.iter() {
            let mut factors = Vec::new();
            for d in multiset {
                let j = d.n_chords() as u32;
                if *d != ChordDiagram::kn(j) {
                    return Err(Error::InvalidChords(format!(
                        "diagram {d} is not the complete diagram K{j}"
                    )));
                }
                factors.push((Generator::K(j), 1));
            }
            out.add_term(Monomial::from_factors(factors), rat_int(*coeff));
        }
        Ok(out)
    }
}

/// The subdiagram spanned by the chords at the given (0-based) positions,
/// with surviving endpoints relabeled order-preservingly.
pub fn chord_subdiagram(d: &ChordDiagram, chords: &[usize]) -> ChordDiagram {
    let mut endpoints: Vec<u32> = chords
        .iter()
        .flat_map(|&i| {
            let (a, b) = d.pairs()[i];
            [a, b]
        })
        .collect();
    endpoints.sort_unstable();
    let relabel = |x: u32| (endpoints.binary_search(&x).unwrap() + 1) as u32;
    let pairs = chords.iter().map(|&i| {
        let (a, b) = d.pairs()[i];
        (relabel(a), relabel(b))
    });
    ChordDiagram::from_pairs(pairs).expect("subdiagram of a diagram is a diagram")
}

/// Δ(D): all 2ⁿ ordered splittings (D_J, D_{J̄}) of the chord set, listed by
/// ascending subset mask.
pub fn coproduct(d: &ChordDiagram) -> Vec<(ChordDiagram, ChordDiagram)> {
    let n = d.n_chords();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let selected: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let complement: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        out.push((
            chord_subdiagram(d, &selected),
            chord_subdiagram(d, &complement),
        ));
    }
    out
}

/// All set partitions of {0..n−1}; parts are listed by their minimal
/// element, elements inside a part ascend.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn recurse(k: usize, n: usize, parts: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == n {
            out.push(parts.clone());
            return;
        }
        for i in 0..parts.len() {
            parts[i].push(k);
            recurse(k + 1, n, parts, out);
            parts[i].pop();
        }
        parts.push(vec![k]);
        recurse(k + 1, n, parts, out);
        parts.pop();
    }
    let mut out = Vec::new();
    recurse(0, n, &mut Vec::new(), &mut out);
    out
}

/// π(D): the projection of a diagram onto the primitive elements of the
/// Hopf algebra, as a combination of products of its subdiagrams.
pub fn primitive_projection(d: &ChordDiagram) -> DiagramCombination {
    let mut out = DiagramCombination::zero();
    for partition in set_partitions(d.n_chords()) {
        let i = partition.len();
        let mut coeff: i64 = if i % 2 == 1 { 1 } else { -1 };
        for j in 1..i as i64 {
            coeff *= j;
        }
        let multiset: Vec<ChordDiagram> = partition
            .iter()
            .map(|part| chord_subdiagram(d, part))
            .collect();
        out.add_term(multiset, coeff);
    }
    out
}

/// The reduced weight w̄(D) = w(π(D)): evaluate every product of
/// subdiagrams and combine with the projection's integer coefficients.
pub fn wbar(d: &ChordDiagram, cache: &mut MemoCache) -> Polynomial {
    let projection = primitive_projection(d);
    let mut out = Polynomial::zero();
    for (multiset, coeff) in projection.iter() {
        let mut prod = Polynomial::int(*coeff);
        for diagram in multiset {
            let value = wgl(&diagram.to_permutation(), cache);
            prod = &prod * &value;
        }
        out.add_assign(&prod);
    }
    out
}

/// π(K_1) … π(K_n_max) as polynomials in the symbols K_j, computed from the
/// generating identity Σ π(K_n) xⁿ/n! = log(1 + Σ K_n xⁿ/n!).
/// Index 0 of the returned vector is zero-padding.
pub fn kn_primitive_series(n_max: u32) -> Vec<Polynomial> {
    let t = n_max as usize;
    let mut f = PowerSeries::one(t);
    let mut factorial = Rat::one();
    for n in 1..=t {
        factorial *= rat_int(n as i64);
        let coeff =
            Polynomial::generator(Generator::K(n as u32)).scale(&(Rat::one() / &factorial));
        f.set_coeff(n, coeff);
    }
    let l = f.log().expect("constant term is one");
    let mut out = vec![Polynomial::zero()];
    let mut factorial = Rat::one();
    for n in 1..=t {
        factorial *= rat_int(n as i64);
        out.push(l.coeff(n).scale(&factorial));
    }
    out
}

/// A tensor square element of the K-symbol algebra, used to state
/// primitivity: Δ(x) = x⊗1 + 1⊗x.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KTensor {
    terms: BTreeMap<(Monomial, Monomial), Rat>,
}

impl KTensor {
    pub fn zero() -> KTensor {
        KTensor::default()
    }

    fn add_term(&mut self, left: Monomial, right: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add_assign(&mut self, other: &KTensor) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c.clone());
        }
    }

    fn mul(&self, other: &KTensor) -> KTensor {
        let mut out = KTensor::zero();
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                out.add_term(la.mul(lb), ra.mul(rb), ca * cb);
            }
        }
        out
    }

    fn scale(&self, c: &Rat) -> KTensor {
        let mut out = KTensor::zero();
        for ((l, r), x) in &self.terms {
            out.add_term(l.clone(), r.clone(), x * c);
        }
        out
    }
}

/// The tensor a⊗b.
pub fn tensor(a: &Polynomial, b: &Polynomial) -> KTensor {
    let mut out = KTensor::zero();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.add_term(ma.clone(), mb.clone(), ca * cb);
        }
    }
    out
}

/// The coproduct extended to polynomials in the symbols K_j:
/// Δ(K_n) = Σ_j binom(n,j)·K_j ⊗ K_{n−j} (with K_0 = 1), multiplicatively on
/// products and linearly on sums. Rejects non-K generators.
pub fn k_coproduct(p: &Polynomial) -> Result<KTensor> {
    let k_symbol = |j: u32| {
        if j == 0 {
            Monomial::unit()
        } else {
            Monomial::generator(Generator::K(j))
        }
    };
    let mut out = KTensor::zero();
    for (mono, coeff) in p.iter() {
        let mut factor = tensor(&Polynomial::one(), &Polynomial::one());
        for (g, e) in mono.iter() {
            let Generator::K(n) = g else {
                return Err(Error::UnsupportedGenerator {
                    gen: g.name(),
                    context: "the diagram coproduct",
                });
            };
            let mut delta_kn = KTensor::zero();
            let mut binom = Rat::one();
            for j in 0..=n {
                if j > 0 {
                    binom = binom * rat_int((n - j + 1) as i64) / rat_int(j as i64);
                }
                delta_kn.add_term(k_symbol(j), k_symbol(n - j), binom.clone());
            }
            for _ in 0..e {
                factor = factor.mul(&delta_kn);
            }
        }
        out.add_assign(&factor.scale(coeff));
    }
    Ok(out)
}

/// Is p primitive, i.e. Δ(p) = p⊗1 + 1⊗p? (p must be constant-free —
/// a nonzero constant term can never be primitive, and indeed fails here.)
pub fn is_primitive(p: &Polynomial) -> Result<bool> {
    let delta = k_coproduct(p)?;
    let mut expected = tensor(p, &Polynomial::one());
    expected.add_assign(&tensor(&Polynomial::one(), p));
    Ok(delta == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn bell_numbers() {
        let bells = [1usize, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bells.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b, "partitions of {n} elements");
        }
    }

    #[test]
    fn subdiagrams_of_complete_diagrams_are_complete() {
        let k4 = ChordDiagram::kn(4);
        assert_eq!(chord_subdiagram(&k4, &[1, 3]), ChordDiagram::kn(2));
        assert_eq!(chord_subdiagram(&k4, &[0, 1, 2, 3]), k4);
        assert_eq!(chord_subdiagram(&k4, &[]), ChordDiagram::kn(0));
    }

    #[test]
    fn subdiagram_relabeling() {
        // 1-3,2-5,4-6: keeping chords 0 and 2 leaves endpoints 1,3,4,6,
        // relabeled to 1-2,3-4.
        let d = ChordDiagram::from_pairs([(1, 3), (2, 5), (4, 6)]).unwrap();
        let sub = chord_subdiagram(&d, &[0, 2]);
        assert_eq!(sub, ChordDiagram::from_pairs([(1, 2), (3, 4)]).unwrap());
    }

    #[test]
    fn coproduct_of_k2() {
        let k2 = ChordDiagram::kn(2);
        let k1 = ChordDiagram::kn(1);
        let empty = ChordDiagram::kn(0);
        let pairs = coproduct(&k2);
        assert_eq!(
            pairs,
            vec![
                (empty.clone(), k2.clone()),
                (k1.clone(), k1.clone()),
                (k1.clone(), k1),
                (k2, empty),
            ]
        );
    }

    #[test]
    fn projection_small_cases() {
        let k1 = ChordDiagram::kn(1);
        assert_eq!(primitive_projection(&k1), DiagramCombination::single(k1));

        // π(K2) = K2 − K1².
        let k2 = ChordDiagram::kn(2);
        let mut expected = DiagramCombination::single(k2.clone());
        expected.add_term(vec![ChordDiagram::kn(1), ChordDiagram::kn(1)], -1);
        assert_eq!(primitive_projection(&k2), expected);

        // π(K3) = K3 − 3·K2K1 + 2·K1³.
        let k3 = ChordDiagram::kn(3);
        let p = primitive_projection(&k3).as_k_polynomial().unwrap();
        assert_eq!(p, parse_polynomial("K3 - 3 K2 K1 + 2 K1^3").unwrap());
    }

    #[test]
    fn projection_agrees_with_the_logarithm() {
        let series = kn_primitive_series(5);
        for n in 1..=5u32 {
            let direct = primitive_projection(&ChordDiagram::kn(n))
                .as_k_polynomial()
                .unwrap();
            assert_eq!(series[n as usize], direct, "π(K{n})");
        }
    }

    #[test]
    fn reduced_weight_of_k2() {
        // w̄(K2) = w(K2) − w(K1)² = C1² − N·C2.
        let mut cache = MemoCache::new();
        let value = wbar(&ChordDiagram::kn(2), &mut cache);
        assert_eq!(value, parse_polynomial("C1^2 - N*C2").unwrap());
    }

    #[test]
    fn projections_are_primitive() {
        for n in 1..=4u32 {
            let p = primitive_projection(&ChordDiagram::kn(n))
                .as_k_polynomial()
                .unwrap();
            assert!(is_primitive(&p).unwrap(), "π(K{n}) primitive");
        }
        // K2 itself is not primitive: Δ(K2) has the middle term 2·K1⊗K1.
        let k2 = parse_polynomial("K2").unwrap();
        assert!(!is_primitive(&k2).unwrap());
    }

    #[test]
    fn coproduct_rejects_foreign_symbols() {
        let p = parse_polynomial("C2").unwrap();
        assert!(matches!(
            k_coproduct(&p),
            Err(Error::UnsupportedGenerator { .. })
        ));
    }

    #[test]
    fn combination_arithmetic_cancels() {
        let k1 = ChordDiagram::kn(1);
        let mut c = DiagramCombination::zero();
        c.add_term(vec![k1.clone()], 2);
        c.add_term(vec![k1.clone()], -2);
        assert_eq!(c, DiagramCombination::zero());
        // Multiset keys are order-insensitive.
        let k2 = ChordDiagram::kn(2);
        let mut a = DiagramCombination::zero();
        a.add_term(vec![k1.clone(), k2.clone()], 1);
        let mut b = DiagramCombination::zero();
        b.add_term(vec![k2, k1], 1);
        assert_eq!(a, b);
    }
}
