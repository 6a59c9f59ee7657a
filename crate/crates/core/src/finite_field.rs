//! Finite fields GF(p^m) with table-driven arithmetic.
//!
//! Elements are identified with their canonical index: the element with
//! coefficient vector (c_0, …, c_{m−1}) over GF(p) (power basis in a root
//! z of the modulus) has index Σ c_i p^i. Zero has index 0 and one has
//! index 1. Every matrix in the crate is indexed in this order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::Cyclotomic;

/// Largest field order for which arithmetic tables are built.
pub const MAX_FIELD_ORDER: u32 = 4096;

/// A field element, stored as its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    /// The canonical index.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^m) together with its defining modulus and arithmetic tables.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub struct FieldSpec {
    p: u32,
    m: u32,
    /// Monic modulus, low degree first, length m + 1.
    modulus: Vec<u32>,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u32,
    m: u32,
    modulus: Vec<u32>,
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = Error;
    fn try_from(r: FieldSpecRepr) -> Result<Self> {
        FieldSpec::with_modulus(r.p, r.m, &r.modulus)
    }
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(f: FieldSpec) -> Self {
        Self { p: f.p, m: f.m, modulus: f.modulus }
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.m, self.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factors `v` as p^m with p prime, or `None`.
pub fn is_prime_power(v: u64) -> Option<(u64, u32)> {
    if v < 2 {
        return None;
    }
    let p = (2..).find(|d| v.is_multiple_of(*d) || d * d > v).filter(|d| v.is_multiple_of(*d)).unwrap_or(v);
    let (mut rest, mut m) = (v, 0u32);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

// --- polynomials over GF(p), low degree first ---

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db], p);
    let mut r = poly_trim(a.to_vec());
    while r.len() > db {
        let top = r.len() - 1;
        let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = top - db;
        for (j, &bj) in b.iter().enumerate() {
            let sub = (c as u64 * bj as u64 % p as u64) as u32;
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    // p is prime; Fermat's little theorem.
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Monic polynomials of degree `d` in lexicographic order, low degree first.
fn monic_polys(p: u32, d: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d);
    (0..count).map(move |mut idx| {
        let mut c = Vec::with_capacity(d as usize + 1);
        for _ in 0..d {
            c.push((idx % p as u64) as u32);
            idx /= p as u64;
        }
        c.push(1);
        c
    })
}

/// Trial division by every monic polynomial of degree 1..=m/2.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() as u32 - 1;
    (1..=m / 2).all(|d| monic_polys(p, d).all(|f| !poly_rem(modulus, &f, p).is_empty()))
}

impl FieldSpec {
    /// GF(p^m) with the lexicographically smallest monic irreducible modulus
    /// (coefficients compared low degree first).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::check_params(p, m)?;
        let modulus =
            monic_polys(p, m).find(|f| is_irreducible(f, p)).expect("an irreducible polynomial exists in every degree");
        Self::build(p, m, modulus)
    }

    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<Self> {
        Self::check_params(p, m)?;
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::InvalidModulus(format!("{modulus:?} is not monic of degree {m}")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!("{modulus:?} has digits >= {p}")));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidModulus(format!("{modulus:?} is reducible over GF({p})")));
        }
        Self::build(p, m, modulus.to_vec())
    }

    /// The field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, m) = is_prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p as u32, m)
    }

    fn check_params(p: u32, m: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("field degree must be >= 1".into()));
        }
        match (p as u64).checked_pow(m) {
            Some(q) if q <= MAX_FIELD_ORDER as u64 => Ok(()),
            _ => Err(Error::InvalidParameter(format!("GF({p}^{m}) exceeds the supported order {MAX_FIELD_ORDER}"))),
        }
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(m);
        let n = q as usize;
        let digits = |i: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(m as usize);
            let mut x = i;
            for _ in 0..m {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let index = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let all: Vec<Vec<u32>> = (0..q).map(digits).collect();

        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = index(&s);
                let mut prod = vec![0u32; 2 * m as usize - 1];
                for (i, &x) in all[a].iter().enumerate() {
                    for (j, &y) in all[b].iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(m as usize, 0);
                mul[a * n + b] = index(&r);
            }
        }
        let neg = (0..n).map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u32).collect();
        let inv =
            (0..n).map(|a| if a == 0 { 0 } else { (0..n).find(|&b| mul[a * n + b] == 1).unwrap() as u32 }).collect();
        let mut f = Self { p, m, modulus, q, add, mul, neg, inv, trace: Vec::new() };
        f.trace = (0..q)
            .map(|a| {
                // Tr(a) = a + a^p + … + a^(p^(m−1))
                let mut term = FieldElement(a);
                let mut acc = FieldElement::ZERO;
                for _ in 0..m {
                    acc = f.add(acc, term);
                    term = f.pow(term, p as u64);
                }
                debug_assert!(acc.0 < p, "trace must land in the prime field");
                acc.0
            })
            .collect();
        Ok(f)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::InvalidParameter(format!("{index} is not an element of GF({})", self.q)))
        }
    }

    /// The image of the integer `k` under Z → GF(q).
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut x = a.0;
        (0..self.m)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElement> {
        if c.len() != self.m as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::InvalidParameter(format!("bad coefficient vector {c:?}")));
        }
        Ok(FieldElement(c.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.inv[a.index()]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let (mut base, mut acc) = (a, FieldElement::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to the prime field, as a residue mod p.
    pub fn trace(&self, a: FieldElement) -> u32 {
        self.trace[a.index()]
    }

    /// Exponent k with χ(a) = ζ_n^k for the canonical additive character
    /// χ(a) = ζ_p^{Tr(a)} embedded in Q(ζ_n).
    pub fn character_exponent(&self, a: FieldElement, ambient_order: u32) -> Result<u32> {
        if !ambient_order.is_multiple_of(self.p) {
            return Err(Error::InvalidParameter(format!("characteristic {} does not divide {ambient_order}", self.p)));
        }
        Ok(ambient_order / self.p * self.trace(a))
    }

    pub fn additive_character(&self, a: FieldElement, ambient_order: u32) -> Result<Cyclotomic> {
        let k = self.character_exponent(a, ambient_order)?;
        Ok(Cyclotomic::zeta_pow(ambient_order, k as i64))
    }

    /// 0 on zero, +1 on nonzero squares, −1 otherwise. Defined for odd q only.
    pub fn quadratic_character(&self, a: FieldElement) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::EvenOrder(self.q as u64));
        }
        if a.is_zero() {
            return Ok(0);
        }
        // Euler's criterion: a^((q−1)/2) = ±1.
        let e = self.pow(a, (self.q as u64 - 1) / 2);
        Ok(if e == FieldElement::ONE { 1 } else { -1 })
    }

    /// Human-readable element, e.g. `2`, `z`, `z+1`, `2z^2+1`.
    pub fn format(&self, a: FieldElement) -> String {
        if self.m == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                let coef = if d == 1 && i > 0 { String::new() } else { d.to_string() };
                match i {
                    0 => coef,
                    1 => format!("{coef}z"),
                    _ => format!("{coef}z^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}
