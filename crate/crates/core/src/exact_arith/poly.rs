//! Dense univariate polynomials, coefficients stored low degree first.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;

/// Φ_n as an integer polynomial, by exact division of x^n − 1 by Φ_d for
/// every proper divisor d of n.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = div_exact_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Exact quotient of `num` by a monic `den`; panics if the division leaves
/// a remainder.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// Reduces `a` modulo the monic integer polynomial `m` in place, returning
/// exactly `deg(m)` coefficients.
pub fn reduce_mod_monic(mut a: Vec<Rational>, m: &[BigInt]) -> Vec<Rational> {
    let d = m.len() - 1;
    if a.len() > d {
        for top in (d..a.len()).rev() {
            let c = std::mem::replace(&mut a[top], Rational::zero());
            if c.is_zero() {
                continue;
            }
            // x^top = x^(top-d) * x^d and x^d ≡ -(m_0 + ... + m_{d-1} x^{d-1})
            let shift = top - d;
            for (j, mj) in m[..d].iter().enumerate() {
                if !mj.is_zero() {
                    a[shift + j] -= &c * Rational::from_integer(mj.clone());
                }
            }
        }
        a.truncate(d);
    }
    a.resize(d, Rational::zero());
    a
}

/// Rational polynomial helpers used by the extended Euclidean inverse.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RatPoly(pub Vec<Rational>);

impl RatPoly {
    pub fn from_ints(c: &[BigInt]) -> Self {
        Self(c.iter().cloned().map(Rational::from_integer).collect()).trimmed()
    }

    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self(out).trimmed()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        Self(out).trimmed()
    }

    /// Quotient and remainder; `den` must be nonzero.
    pub fn divrem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero());
        let mut rem = self.0.clone();
        if rem.len() < den.0.len() {
            return (Self(Vec::new()), self.clone());
        }
        let dd = den.degree();
        let lead = den.0[dd].clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in den.0.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self(quot).trimmed(), Self(rem).trimmed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn base_and_prime_cases() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(5), ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn phi_15_matches_hand_division() {
        // x^8 - x^7 + x^5 - x^4 + x^3 - x + 1
        assert_eq!(cyclotomic_polynomial(15), ints(&[1, -1, 0, 1, -1, 1, 0, -1, 1]));
    }

    #[test]
    fn product_over_divisors_is_x_n_minus_one() {
        for n in [6u32, 10, 12, 21, 33] {
            let mut prod = RatPoly::from_ints(&ints(&[1]));
            for d in (1..=n).filter(|d| n % d == 0) {
                prod = prod.mul(&RatPoly::from_ints(&cyclotomic_polynomial(d)));
            }
            let mut expect = vec![BigInt::zero(); n as usize + 1];
            expect[0] = BigInt::from(-1);
            expect[n as usize] = BigInt::one();
            assert_eq!(prod, RatPoly::from_ints(&expect), "n = {n}");
        }
    }

    #[test]
    fn divrem_reconstructs() {
        let a = RatPoly::from_ints(&ints(&[3, 0, -2, 5, 1]));
        let b = RatPoly::from_ints(&ints(&[1, 2]));
        let (q, r) = a.divrem(&b);
        assert!(r.degree() < b.degree() || r.is_zero());
        let back = q.mul(&b).sub(&a.sub(&r));
        assert!(back.is_zero());
    }
}
