//! The Harish–Chandra image: rewriting weight polynomials from the Casimir
//! generators C_k to the shifted power sums p_k, and evaluating them as
//! eigenvalues on highest-weight modules.
//!
//! The image φ(C_k) of a Casimir generator is a polynomial in N and
//! p_1, …, p_k. All of them at once are encoded by one generating identity
//! between power series in an auxiliary variable u:
//!
//! ```text
//! 1 − N·u − Σ_{k≥1} φ(C_k)·u^{k+1}
//!   = (1 − N·u) · exp( Σ_{k≥1} [ (1−(N−1)u/2)^{−k} − (1−(N+1)u/2)^{−k} ] · (u^k/k) · p_k )
//! ```
//!
//! Expanding the right side to order k+1 with N kept symbolic and reading off
//! the coefficient of u^{k+1} yields φ(C_k) exactly; truncation at k_max + 1
//! is sufficient because the k-th summand starts at order u^{k+1}. The first
//! two coefficients (1 and −N) are reproduced by the expansion and asserted.
//!
//! On a highest-weight module with weight λ = (λ_1 … λ_N), the symbol p_k
//! acts by the scalar Σ_i ( (λ_i + (N+1)/2 − i)^k − ((N+1)/2 − i)^k ).

use std::collections::BTreeMap;
use std::sync::{LazyLock, Mutex};

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::poly::{parse_rat, rat, rat_int, Generator, Polynomial, Rat};
use crate::series::PowerSeries;

/// Cached φ(C_k) values, index k−1. Extended on demand; recomputation at a
/// larger truncation reproduces the same prefix.
static PHI: LazyLock<Mutex<Vec<Polynomial>>> = LazyLock::new(|| Mutex::new(Vec::new()));

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Expands the generating identity up to u^{k_max+1} and collects
/// φ(C_1) … φ(C_k_max).
fn compute_phi_list(k_max: u32) -> Vec<Polynomial> {
    let t = k_max as usize + 1;
    // (N−1)/2 and (N+1)/2.
    let shifted_half = |delta: i64| -> Polynomial {
        let mut p = Polynomial::generator(Generator::N);
        p.add_assign(&Polynomial::int(delta));
        p.scale(&rat(1, 2))
    };
    let a = shifted_half(-1);
    let b = shifted_half(1);

    let mut s = PowerSeries::zero(t);
    for k in 1..=k_max as usize {
        let pk_over_k = Polynomial::generator(Generator::P(k as u32)).scale(&rat(1, k as i64));
        let mut a_pow = Polynomial::one();
        let mut b_pow = Polynomial::one();
        for i in 1..=(t - k) {
            a_pow = &a_pow * &a;
            b_pow = &b_pow * &b;
            let bracket = (&a_pow - &b_pow)
                .scale(&Rat::from_integer(binomial((k + i - 1) as u64, i as u64)));
            if bracket.is_zero() {
                continue;
            }
            let mut contribution = s.coeff(k + i).clone();
            contribution.add_mul_assign(&bracket, &pk_over_k);
            s.set_coeff(k + i, contribution);
        }
    }
    let e = s.exp().expect("argument series has zero constant term");
    let mut one_minus_nu = PowerSeries::one(t);
    one_minus_nu.set_coeff(1, -&Polynomial::generator(Generator::N));
    let r = one_minus_nu.mul(&e).expect("matching truncation orders");

    assert!(r.coeff(0).is_one(), "identity constant term");
    assert_eq!(
        *r.coeff(1),
        -&Polynomial::generator(Generator::N),
        "identity linear term"
    );
    (1..=k_max as usize).map(|k| -r.coeff(k + 1)).collect()
}

/// φ(C_k): the Harish–Chandra image of the k-th Casimir generator as a
/// polynomial in N and p_1 … p_k. Results are cached per k.
pub fn phi_casimir(k: u32) -> Polynomial {
    assert!(k >= 1, "Casimir indices start at 1");
    let mut guard = PHI.lock().unwrap();
    if guard.len() < k as usize {
        let fresh = compute_phi_list(k);
        debug_assert!(
            guard.iter().zip(&fresh).all(|(old, new)| old == new),
            "extending the truncation must not change earlier values"
        );
        *guard = fresh;
    }
    guard[(k - 1) as usize].clone()
}

/// Rewrites a polynomial in {N, C_k} (p_k terms pass through untouched) into
/// the {N, p_k} basis by substituting φ(C_k) for each C_k.
pub fn to_p_basis(p: &Polynomial) -> Result<Polynomial> {
    let mut map = BTreeMap::new();
    for g in p.generators() {
        match g {
            Generator::C(k) => {
                map.insert(g, phi_casimir(k));
            }
            Generator::N | Generator::P(_) => {}
            Generator::K(_) => {
                return Err(Error::UnsupportedGenerator {
                    gen: g.name(),
                    context: "conversion to the power-sum basis",
                })
            }
        }
    }
    Ok(p.substitute(&map))
}

/// A highest weight λ = (λ_1, …, λ_N) with exact rational entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightVector {
    entries: Vec<Rat>,
}

impl WeightVector {
    pub fn new(entries: Vec<Rat>) -> WeightVector {
        WeightVector { entries }
    }

    pub fn from_ints(entries: &[i64]) -> WeightVector {
        WeightVector {
            entries: entries.iter().map(|&x| rat_int(x)).collect(),
        }
    }

    /// Parses `3,1,0` (or `[3,1,0]`); entries may be rationals like `1/2`.
    pub fn parse(input: &str) -> Result<WeightVector> {
        let s = input.trim();
        let s = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(s);
        let entries = s
            .split(',')
            .map(|t| {
                parse_rat(t.trim())
                    .ok_or_else(|| Error::parse(0, format!("bad weight entry {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.is_empty() {
            return Err(Error::parse(0, "empty weight vector"));
        }
        Ok(WeightVector { entries })
    }

    /// The matrix size N this weight belongs to.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// λ_i, 1-based.
    pub fn entry(&self, i: usize) -> &Rat {
        &self.entries[i - 1]
    }
}

/// The scalar by which p_k acts on the highest-weight module V_λ:
/// Σ_i ( (λ_i + (N+1)/2 − i)^k − ((N+1)/2 − i)^k ).
pub fn shifted_power_sum_value(k: u32, lambda: &WeightVector) -> Rat {
    let n = lambda.len() as i64;
    let mut total = Rat::zero();
    for i in 1..=lambda.len() {
        let shift = rat(n + 1, 2) - rat_int(i as i64);
        let x = lambda.entry(i) + &shift;
        total += pow_rat(&x, k) - pow_rat(&shift, k);
    }
    total
}

fn pow_rat(x: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// The eigenvalue of a weight polynomial on V_λ: converts to the power-sum
/// basis, then substitutes N = len(λ) and p_k = its scalar.
pub fn eigenvalue(p: &Polynomial, lambda: &WeightVector) -> Result<Rat> {
    let in_p = to_p_basis(p)?;
    let mut values = BTreeMap::new();
    values.insert(Generator::N, rat_int(lambda.len() as i64));
    for g in in_p.generators() {
        if let Generator::P(k) = g {
            values.insert(g, shifted_power_sum_value(k, lambda));
        }
    }
    in_p.eval(&values)
}
