//! Exact arithmetic in the cyclotomic field Q(ζ_n).
//!
//! Elements are stored in the power basis {1, ζ, …, ζ^(d-1)} of
//! Q[x]/(Φ_n(x)) with d = φ(n). The representation is canonical, so
//! equality is coefficient equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{cyclotomic_polynomial, reduce_mod_monic, RatPoly};
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Per-order data shared by every element of Q(ζ_n).
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    modulus: Vec<BigInt>,
    /// Power-basis coordinates of ζ^k for 0 <= k < n.
    powers: Vec<Vec<i64>>,
}

impl CycloField {
    fn build(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let d = modulus.len() - 1;
        let powers = (0..order as usize)
            .map(|k| {
                let mut mono = vec![Rational::zero(); k + 1];
                mono[k] = Rational::one();
                reduce_mod_monic(mono, &modulus)
                    .into_iter()
                    .map(|c| c.to_integer().to_i64().expect("root power coefficient fits i64"))
                    .collect::<Vec<_>>()
            })
            .inspect(|v| debug_assert_eq!(v.len(), d))
            .collect();
        Self { order, modulus, powers }
    }

    /// Shared instance for order `n`.
    pub fn get(order: u32) -> Arc<CycloField> {
        assert!(order >= 1, "cyclotomic order must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(order).or_insert_with(|| Arc::new(CycloField::build(order))).clone()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(n), the length of every coefficient vector.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Integer power-basis coordinates of ζ^k.
    pub fn root_power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.order as i64) as usize]
    }

    /// Collapses an exponent histogram Σ counts[k]·ζ^k into integer
    /// power-basis coordinates.
    pub fn collapse_counts(&self, counts: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(counts.len(), self.order as usize);
        let mut out = vec![0i64; self.degree()];
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&self.powers[k]) {
                let t = c.checked_mul(p).ok_or(Error::Overflow("collapse_counts"))?;
                *o = o.checked_add(t).ok_or(Error::Overflow("collapse_counts"))?;
            }
        }
        Ok(out)
    }
}

/// An exact element of Q(ζ_n).
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "CyclotomicRepr", into = "CyclotomicRepr")]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

/// Wire form: `{order, coeffs: ["p/q", ...], approx?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclotomicRepr {
    pub order: u32,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<String>,
}

impl TryFrom<CyclotomicRepr> for Cyclotomic {
    type Error = Error;

    fn try_from(r: CyclotomicRepr) -> Result<Self> {
        if r.order == 0 {
            return Err(Error::Parse("cyclotomic order must be positive".into()));
        }
        let coeffs = r.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Cyclotomic::from_coeffs(r.order, coeffs)
    }
}

impl From<Cyclotomic> for CyclotomicRepr {
    fn from(c: Cyclotomic) -> Self {
        Self { order: c.order(), coeffs: c.coeffs.iter().map(format_rational).collect(), approx: None }
    }
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        let field = CycloField::get(order);
        let coeffs = vec![Rational::zero(); field.degree()];
        Self { field, coeffs }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_int(order: u32, v: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(order: u32, v: Rational) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = v;
        out
    }

    /// ζ_n^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let field = CycloField::get(order);
        let coeffs = field.root_power(k).iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        Self { field, coeffs }
    }

    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<Self> {
        let field = CycloField::get(order);
        if coeffs.len() != field.degree() {
            return Err(Error::Parse(format!(
                "Q(zeta_{order}) needs {} coefficients, got {}",
                field.degree(),
                coeffs.len()
            )));
        }
        Ok(Self { field, coeffs })
    }

    pub fn from_int_coeffs(order: u32, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(order, coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    /// Reduces an arbitrary-length coefficient vector modulo Φ_n.
    pub fn from_unreduced(order: u32, coeffs: Vec<Rational>) -> Self {
        let field = CycloField::get(order);
        let coeffs = reduce_mod_monic(coeffs, &field.modulus);
        Self { field, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational().filter(|r| r.is_integer()).and_then(|r| r.to_integer().to_i64())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { field: self.field.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { field: self.field.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let d = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let coeffs = reduce_mod_monic(prod, &self.field.modulus);
        Ok(Self { field: self.field.clone(), coeffs })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Φ_n.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Invariant: s_i * a ≡ r_i (mod Φ_n).
        let mut r0 = RatPoly::from_ints(&self.field.modulus);
        let mut r1 = RatPoly(self.coeffs.clone()).trimmed();
        let mut s0 = RatPoly(Vec::new());
        let mut s1 = RatPoly(vec![Rational::one()]);
        while r1.degree() > 0 {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φ_n is irreducible, so the last nonzero remainder is a unit.
        let unit = r1.0[0].clone();
        let scaled = s1.0.into_iter().map(|c| c / &unit).collect();
        Ok(Self::from_unreduced(self.order(), scaled))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inverse()?)
    }

    /// The Galois automorphism ζ ↦ ζ^t; `t` must be coprime to n.
    pub fn galois(&self, t: i64) -> Self {
        let n = self.order() as i64;
        debug_assert_eq!(num_integer::gcd(t.rem_euclid(n), n), 1);
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.field.root_power(t * k as i64)) {
                if p != 0 {
                    *o += c * Rational::from_integer(BigInt::from(p));
                }
            }
        }
        Self { field: self.field.clone(), coeffs: out }
    }

    /// Complex conjugation, ζ ↦ ζ^(n−1).
    pub fn conj(&self) -> Self {
        self.galois(self.order() as i64 - 1)
    }

    /// Floating-point value of the element, via ζ_n ≈ e^{2πi/n}.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order() as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / n;
            (re + v * t.cos(), im + v * t.sin())
        })
    }

    /// Decimal approximation `"a + bi"` with `digits` places after the point.
    pub fn approx(&self, digits: usize) -> String {
        let (re, im) = self.to_complex();
        let clean = |x: f64| {
            let s = format!("{:.*}", digits, x.abs());
            // avoid "-0.000"
            let zero = s.chars().all(|c| c == '0' || c == '.');
            (if x < 0.0 && !zero { "-" } else { "" }, s)
        };
        let (rs, rv) = clean(re);
        let (is, iv) = clean(im);
        let op = if is == "-" { "-" } else { "+" };
        format!("{rs}{rv} {op} {iv}i")
    }

    /// Sum of `c·ζ^k` terms, e.g. `3ζ^3 + 1`; `"0"` for zero.
    pub fn to_zeta_string(&self) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match k {
                0 => format_rational(&mag),
                _ => {
                    let z = if k == 1 { "ζ".to_string() } else { format!("ζ^{k}") };
                    if mag.is_one() {
                        z
                    } else {
                        format!("{}{}", format_rational(&mag), z)
                    }
                }
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => out.push('-'),
                (0, _) => {}
                (_, s) => {
                    out.push(' ');
                    out.push_str(s);
                    out.push(' ');
                }
            }
            out.push_str(body);
        }
        out
    }

    /// Lexicographic key on the coefficient vector, used for canonical ordering.
    pub fn cmp_coeffs(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ_{})[{}]", self.order(), self.to_zeta_string())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_zeta_string())
    }
}

// Operators panic on mixed orders; the `try_*` methods report it instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$try(rhs).expect("cyclotomic operands must share an order")
            }
        }
        impl $trait for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}
