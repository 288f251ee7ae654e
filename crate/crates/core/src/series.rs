//! Truncated formal power series in one variable `u` with [`Polynomial`]
//! coefficients.
//!
//! A series carries its truncation order explicitly: a `PowerSeries` with
//! truncation order `T` stores the coefficients of `u^0 … u^T` and nothing
//! beyond. Binary operations insist that both sides share the same order —
//! mixing truncations silently would corrupt tail coefficients.

use std::fmt;

use num::One;

use crate::error::{Error, Result};
use crate::poly::{rat_int, Polynomial, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerSeries {
    /// `coeffs[j]` is the coefficient of `u^j`; length is `trunc + 1`.
    coeffs: Vec<Polynomial>,
}

impl PowerSeries {
    pub fn zero(trunc: usize) -> PowerSeries {
        PowerSeries {
            coeffs: vec![Polynomial::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> PowerSeries {
        let mut s = PowerSeries::zero(trunc);
        s.coeffs[0] = Polynomial::one();
        s
    }

    /// Builds a series from explicit coefficients (index = power of u).
    pub fn from_coeffs(coeffs: Vec<Polynomial>) -> PowerSeries {
        assert!(!coeffs.is_empty(), "a series stores at least u^0");
        PowerSeries { coeffs }
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Polynomial {
        &self.coeffs[j]
    }

    pub fn set_coeff(&mut self, j: usize, p: Polynomial) {
        self.coeffs[j] = p;
    }

    fn check_same_order(&self, other: &PowerSeries) -> Result<()> {
        if self.truncation_order() != other.truncation_order() {
            return Err(Error::TruncationMismatch(
                self.truncation_order(),
                other.truncation_order(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check_same_order(other)?;
        Ok(PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check_same_order(other)?;
        let t = self.truncation_order();
        let mut out = PowerSeries::zero(t);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > t {
                    break;
                }
                if !b.is_zero() {
                    out.coeffs[i + j].add_mul_assign(a, b);
                }
            }
        }
        Ok(out)
    }

    /// exp of a series with zero constant term, via the recurrence
    /// `n·e_n = Σ_{j=1..n} j·s_j·e_{n−j}` (differentiate `E = exp S`).
    pub fn exp(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesConstantTerm {
                op: "exp",
                need: "0",
                found: self.coeffs[0].to_string(),
            });
        }
        let t = self.truncation_order();
        let mut e = PowerSeries::zero(t);
        e.coeffs[0] = Polynomial::one();
        for n in 1..=t {
            let mut acc = Polynomial::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let weighted = self.coeffs[j].scale(&rat_int(j as i64));
                acc.add_mul_assign(&weighted, &e.coeffs[n - j]);
            }
            e.coeffs[n] = acc.scale(&(Rat::one() / rat_int(n as i64)));
        }
        Ok(e)
    }

    /// log of a series with constant term 1, via
    /// `l_n = f_n − (1/n)·Σ_{j=1..n−1} j·l_j·f_{n−j}`.
    pub fn log(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesConstantTerm {
                op: "log",
                need: "1",
                found: self.coeffs[0].to_string(),
            });
        }
        let t = self.truncation_order();
        let mut l = PowerSeries::zero(t);
        for n in 1..=t {
            let mut acc = Polynomial::zero();
            for j in 1..n {
                if l.coeffs[j].is_zero() || self.coeffs[n - j].is_zero() {
                    continue;
                }
                let weighted = l.coeffs[j].scale(&rat_int(j as i64));
                acc.add_mul_assign(&weighted, &self.coeffs[n - j]);
            }
            l.coeffs[n] = &self.coeffs[n] - &acc.scale(&(Rat::one() / rat_int(n as i64)));
        }
        Ok(l)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*u^{j}")?;
        }
        write!(f, " + O(u^{})", self.truncation_order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Generator;

    fn u_plus_one(t: usize) -> PowerSeries {
        let mut s = PowerSeries::one(t);
        s.set_coeff(1, Polynomial::one());
        s
    }

    #[test]
    fn multiplication_truncates() {
        // (1+u)(1-u) = 1 - u^2 at truncation 3.
        let a = u_plus_one(3);
        let mut b = PowerSeries::one(3);
        b.set_coeff(1, Polynomial::int(-1));
        let prod = a.mul(&b).unwrap();
        assert_eq!(*prod.coeff(0), Polynomial::one());
        assert!(prod.coeff(1).is_zero());
        assert_eq!(*prod.coeff(2), Polynomial::int(-1));
        assert!(prod.coeff(3).is_zero());
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let a = PowerSeries::one(2);
        let b = PowerSeries::one(3);
        assert!(matches!(a.mul(&b), Err(Error::TruncationMismatch(2, 3))));
        assert!(matches!(a.add(&b), Err(Error::TruncationMismatch(2, 3))));
    }

    #[test]
    fn exp_log_are_mutually_inverse() {
        // S = N*u + C2*u^2 (zero constant term).
        let mut s = PowerSeries::zero(6);
        s.set_coeff(1, Polynomial::generator(Generator::N));
        s.set_coeff(2, Polynomial::generator(Generator::C(2)));
        let e = s.exp().unwrap();
        assert_eq!(e.log().unwrap(), s);

        // And the other way round for F = 1 + p1*u.
        let mut f = PowerSeries::one(5);
        f.set_coeff(1, Polynomial::generator(Generator::P(1)));
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn exp_matches_direct_expansion() {
        // exp(u) coefficients are 1/n!.
        let mut s = PowerSeries::zero(5);
        s.set_coeff(1, Polynomial::one());
        let e = s.exp().unwrap();
        let mut fact = 1i64;
        for n in 0..=5 {
            if n > 0 {
                fact *= n as i64;
            }
            assert_eq!(
                *e.coeff(n),
                Polynomial::constant(Rat::one() / rat_int(fact))
            );
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let s = PowerSeries::one(2); // constant term 1, not 0
        assert!(matches!(s.exp(), Err(Error::SeriesConstantTerm { .. })));
        let z = PowerSeries::zero(2); // constant term 0, not 1
        assert!(matches!(z.log(), Err(Error::SeriesConstantTerm { .. })));
    }

    #[test]
    fn log_of_diagram_counting_series() {
        // log(1 + K1 u + K2 u^2/2 + K3 u^3/6): the u^2 coefficient times 2!
        // is K2 - K1^2 and the u^3 coefficient times 3! is K3 - 3 K1 K2 + 2 K1^3.
        let k = |j: u32| Polynomial::generator(Generator::K(j));
        let mut f = PowerSeries::one(3);
        f.set_coeff(1, k(1));
        f.set_coeff(2, k(2).scale(&Rat::new(1.into(), 2.into())));
        f.set_coeff(3, k(3).scale(&Rat::new(1.into(), 6.into())));
        let l = f.log().unwrap();

        let two = l.coeff(2).scale(&rat_int(2));
        assert_eq!(two, &k(2) - &(&k(1) * &k(1)));

        let six = l.coeff(3).scale(&rat_int(6));
        let expected = &(&k(3) - &(&k(1) * &k(2)).scale(&rat_int(3)))
            + &(&(&k(1) * &k(1)) * &k(1)).scale(&rat_int(2));
        assert_eq!(six, expected);
    }
}
