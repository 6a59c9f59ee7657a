//! The multiplicative table of GF(q), its regular permutation
//! representation φ, and the auxiliary matrices C_a built from them.
//!
//! C_α (α ∈ GF(q)) is the q×q grid of q×q blocks whose (α′, α″) block is
//! φ(α(α″ − α′)). Two extra labels complete the family: C_x is the zero
//! matrix and C_y = I_q ⊗ J_q.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::check::{CheckReport, ClauseBuilder};
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::int_linalg::{lin_comb, IntMatrix};

/// Index of an auxiliary matrix: a field element, or one of the two
/// indeterminates `x` and `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum AuxLabel {
    Field(FieldElement),
    X,
    Y,
}

impl fmt::Display for AuxLabel {
    /// `x`, `y`, or the canonical index of the field element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxLabel::Field(a) => write!(f, "{}", a.0),
            AuxLabel::X => f.write_str("x"),
            AuxLabel::Y => f.write_str("y"),
        }
    }
}

impl FromStr for AuxLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(AuxLabel::X),
            "y" | "Y" => Ok(AuxLabel::Y),
            t => t
                .parse::<u32>()
                .map(|i| AuxLabel::Field(FieldElement(i)))
                .map_err(|_| Error::Parse(format!("bad auxiliary label {t:?}"))),
        }
    }
}

impl From<AuxLabel> for String {
    fn from(l: AuxLabel) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for AuxLabel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// H[α][β] = αβ.
pub fn mult_table(spec: &FieldSpec) -> Vec<Vec<FieldElement>> {
    spec.elements().map(|a| spec.elements().map(|b| spec.mul(a, b)).collect()).collect()
}

/// Whether `h` is a GH(q, 1) over the additive group: for every pair of
/// distinct rows the entrywise differences hit each element exactly once.
pub fn verify_gh(spec: &FieldSpec, h: &[Vec<FieldElement>]) -> bool {
    let q = spec.order() as usize;
    if h.len() != q || h.iter().any(|r| r.len() != q || r.iter().any(|e| e.index() >= q)) {
        return false;
    }
    (0..q).all(|i| {
        (0..q).filter(|&k| k != i).all(|k| {
            let mut seen = vec![false; q];
            h[i].iter().zip(&h[k]).all(|(&a, &b)| !std::mem::replace(&mut seen[spec.sub(a, b).index()], true))
        })
    })
}

/// φ(a): the permutation matrix of translation by `a`, i.e. entry (u, v)
/// is 1 exactly when v = u + a.
pub fn phi_rep(spec: &FieldSpec, a: FieldElement) -> IntMatrix {
    let perm: Vec<usize> = spec.elements().map(|u| spec.add(u, a).index()).collect();
    IntMatrix::permutation_matrix(&perm).expect("translation is a bijection")
}

/// φ(a) assembled as a Kronecker product of powers of the p×p circulant
/// r_p, with the most significant coefficient digit as the leftmost
/// factor. Equal to [`phi_rep`] under canonical indexing.
pub fn phi_rep_kronecker(spec: &FieldSpec, a: FieldElement) -> IntMatrix {
    let p = spec.characteristic() as usize;
    let r_pow = |k: u32| {
        let perm: Vec<usize> = (0..p).map(|u| (u + k as usize) % p).collect();
        IntMatrix::permutation_matrix(&perm).expect("cyclic shift")
    };
    spec.coeffs(a).iter().rev().fold(IntMatrix::identity(1), |acc, &d| acc.kronecker(&r_pow(d)).expect("0/1 entries"))
}

/// The auxiliary matrix C_label of order q².
pub fn aux_matrix(spec: &FieldSpec, label: AuxLabel) -> Result<IntMatrix> {
    let q = spec.order() as usize;
    match label {
        AuxLabel::X => Ok(IntMatrix::zero(q * q, q * q)),
        AuxLabel::Y => IntMatrix::identity(q).kronecker(&IntMatrix::all_ones(q)),
        AuxLabel::Field(alpha) => {
            if alpha.index() >= q {
                return Err(Error::InvalidParameter(format!("{alpha:?} is not in GF({q})")));
            }
            let el = |i: usize| FieldElement(i as u32);
            Ok(IntMatrix::from_fn(q * q, q * q, |r, c| {
                let (a1, u) = (el(r / q), el(r % q));
                let (a2, v) = (el(c / q), el(c % q));
                let shift = spec.mul(alpha, spec.sub(a2, a1));
                (spec.add(u, shift) == v) as i64
            }))
        }
    }
}

/// The matrices C_a for a ∈ GF(q) ∪ {x, y}.
#[derive(Clone, Debug)]
pub struct AuxFamily {
    spec: FieldSpec,
    /// Indexed by field element, then x, then y.
    matrices: Vec<IntMatrix>,
}

impl AuxFamily {
    pub fn new(spec: &FieldSpec) -> Result<Self> {
        let mut matrices = spec.elements().map(|a| aux_matrix(spec, AuxLabel::Field(a))).collect::<Result<Vec<_>>>()?;
        matrices.push(aux_matrix(spec, AuxLabel::X)?);
        matrices.push(aux_matrix(spec, AuxLabel::Y)?);
        Ok(Self { spec: spec.clone(), matrices })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    fn slot(&self, label: AuxLabel) -> Result<usize> {
        let q = self.spec.order() as usize;
        match label {
            AuxLabel::Field(a) if a.index() < q => Ok(a.index()),
            AuxLabel::Field(a) => Err(Error::InvalidParameter(format!("{a:?} is not in GF({q})"))),
            AuxLabel::X => Ok(q),
            AuxLabel::Y => Ok(q + 1),
        }
    }

    pub fn get(&self, label: AuxLabel) -> &IntMatrix {
        &self.matrices[self.slot(label).expect("label belongs to the family")]
    }

    /// Replaces one matrix; used to inject faults in tests.
    pub fn set(&mut self, label: AuxLabel, m: IntMatrix) -> Result<()> {
        let slot = self.slot(label)?;
        self.matrices[slot] = m;
        Ok(())
    }

    /// GF(q) ∪ {y}, the labels over which the identities are stated.
    pub fn field_and_y(&self) -> Vec<AuxLabel> {
        self.spec.elements().map(AuxLabel::Field).chain([AuxLabel::Y]).collect()
    }
}

/// Verifies by exact computation, in order:
///
/// 1. Σ_{a∈F} C_a = qI + (J_q − I_q) ⊗ J_q and Σ_{a∈F∪{y}} C_a = qI + J;
/// 2. C_a² = q C_a;
/// 3. C_a C_a′ = J for distinct a, a′;
/// 4. J C_a = C_a J = qJ;
/// 5. (I_q ⊗ J_q) C_a = C_a (I_q ⊗ J_q) = J,
///
/// with a, a′ ranging over GF(q) ∪ {y}, except that the last identity is
/// checked for a ∈ GF(q) only: C_y = I_q ⊗ J_q itself, and its product with
/// I_q ⊗ J_q is q C_y.
pub fn check_aux_identities(family: &AuxFamily) -> Result<CheckReport> {
    let spec = family.spec();
    let q = spec.order() as usize;
    let n = q * q;
    let qi = q as i64;
    let i_n = IntMatrix::identity(n);
    let j_n = IntMatrix::all_ones(n);
    let iq_jq = IntMatrix::identity(q).kronecker(&IntMatrix::all_ones(q))?;
    let labels = family.field_and_y();
    let name = |l: &AuxLabel| format!("a={l}");

    let mut sums = ClauseBuilder::new("sum_identities");
    let field_terms: Vec<(i64, &IntMatrix)> = spec.elements().map(|a| (1, family.get(AuxLabel::Field(a)))).collect();
    let field_sum = lin_comb(&field_terms)?;
    let jq_minus_iq = IntMatrix::all_ones(q).sub(&IntMatrix::identity(q))?;
    let expect_field = lin_comb(&[(qi, &i_n), (1, &jq_minus_iq.kronecker(&IntMatrix::all_ones(q))?)])?;
    sums.expect_eq("sum over GF(q)", &field_sum, &expect_field);
    let all_sum = field_sum.add(family.get(AuxLabel::Y))?;
    sums.expect_eq("sum over GF(q) and y", &all_sum, &lin_comb(&[(qi, &i_n), (1, &j_n)])?);

    let mut square = ClauseBuilder::new("square_scaling");
    let mut distinct = ClauseBuilder::new("distinct_products");
    let mut ones = ClauseBuilder::new("all_ones_absorption");
    let mut blocks = ClauseBuilder::new("block_ones_absorption");
    let q_j = j_n.scale(qi)?;
    for a in &labels {
        let ca = family.get(*a);
        square.expect_eq(&name(a), &ca.mat_mul(ca)?, &ca.scale(qi)?);
        for b in labels.iter().filter(|b| *b != a) {
            distinct.expect_eq(&format!("a={a}, a'={b}"), &ca.mat_mul(family.get(*b))?, &j_n);
        }
        ones.expect_eq(&format!("J C_{a}"), &j_n.mat_mul(ca)?, &q_j);
        ones.expect_eq(&format!("C_{a} J"), &ca.mat_mul(&j_n)?, &q_j);
        if *a == AuxLabel::Y {
            // (I⊗J) C_y = q C_y, so the block identity is only claimed on GF(q)
            continue;
        }
        blocks.expect_eq(&format!("(I⊗J) C_{a}"), &iq_jq.mat_mul(ca)?, &j_n);
        blocks.expect_eq(&format!("C_{a} (I⊗J)"), &ca.mat_mul(&iq_jq)?, &j_n);
    }
    Ok(CheckReport::new(vec![sums.finish(), square.finish(), distinct.finish(), ones.finish(), blocks.finish()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn idx(t: &[Vec<FieldElement>]) -> Vec<Vec<u32>> {
        t.iter().map(|r| r.iter().map(|e| e.0).collect()).collect()
    }

    #[test]
    fn multiplication_tables() {
        assert_eq!(idx(&mult_table(&f(3))), vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]]);
        assert_eq!(idx(&mult_table(&f(2))), vec![vec![0, 0], vec![0, 1]]);
        // 0, 1, z, z+1 have indices 0..3
        assert_eq!(
            idx(&mult_table(&f(4))),
            vec![vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 3, 1], vec![0, 3, 1, 2]]
        );
    }

    #[test]
    fn generalized_hadamard() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            assert!(verify_gh(&f(q), &mult_table(&f(q))), "q = {q}");
        }
        let zeros = vec![vec![FieldElement::ZERO; 3]; 3];
        assert!(!verify_gh(&f(3), &zeros));
    }

    #[test]
    fn phi_examples() {
        let g3 = f(3);
        assert_eq!(phi_rep(&g3, FieldElement::ZERO), IntMatrix::identity(3));
        let r3 = IntMatrix::permutation_matrix(&[1, 2, 0]).unwrap();
        assert_eq!(phi_rep(&g3, FieldElement(1)), r3);
        assert_eq!(phi_rep(&g3, FieldElement(2)), r3.mat_mul(&r3).unwrap());
        for q in [4, 8, 9] {
            let s = f(q);
            for a in s.elements() {
                assert_eq!(phi_rep(&s, a), phi_rep_kronecker(&s, a), "q = {q}, a = {a:?}");
            }
        }
    }

    #[test]
    fn phi_gf4_digit_order() {
        // a + bz has index a + 2b; the z-digit is the leftmost factor
        let s = f(4);
        let r2 = IntMatrix::permutation_matrix(&[1, 0]).unwrap();
        let i2 = IntMatrix::identity(2);
        assert_eq!(phi_rep(&s, FieldElement(1)), i2.kronecker(&r2).unwrap());
        assert_eq!(phi_rep(&s, FieldElement(2)), r2.kronecker(&i2).unwrap());
    }

    #[test]
    fn phi_is_a_homomorphism() {
        for q in [2, 3, 4, 5, 8, 9] {
            let s = f(q);
            for a in s.elements() {
                for b in s.elements() {
                    let lhs = phi_rep(&s, a).mat_mul(&phi_rep(&s, b)).unwrap();
                    assert_eq!(lhs, phi_rep(&s, s.add(a, b)));
                }
            }
        }
    }

    #[test]
    fn aux_matrices_for_q3() {
        let s = f(3);
        let c0 = aux_matrix(&s, AuxLabel::Field(FieldElement(0))).unwrap();
        assert_eq!(c0, IntMatrix::all_ones(3).kronecker(&IntMatrix::identity(3)).unwrap());
        assert_eq!(aux_matrix(&s, AuxLabel::X).unwrap(), IntMatrix::zero(9, 9));
        let c1 = aux_matrix(&s, AuxLabel::Field(FieldElement(1))).unwrap();
        let phi = |k: u32| phi_rep(&s, FieldElement(k));
        let grid = vec![vec![phi(0), phi(1), phi(2)], vec![phi(2), phi(0), phi(1)], vec![phi(1), phi(2), phi(0)]];
        assert_eq!(c1, IntMatrix::block_assemble(&grid).unwrap());
        let c2 = aux_matrix(&s, AuxLabel::Field(FieldElement(2))).unwrap();
        let grid = vec![vec![phi(0), phi(2), phi(1)], vec![phi(1), phi(0), phi(2)], vec![phi(2), phi(1), phi(0)]];
        assert_eq!(c2, IntMatrix::block_assemble(&grid).unwrap());
    }

    #[test]
    fn aux_matrices_for_q4() {
        let s = f(4);
        let phi = |k: u32| phi_rep(&s, FieldElement(k));
        // element indices: 0, 1, z = 2, z+1 = 3
        let cz = aux_matrix(&s, AuxLabel::Field(FieldElement(2))).unwrap();
        let grid = vec![
            vec![phi(0), phi(2), phi(3), phi(1)],
            vec![phi(2), phi(0), phi(1), phi(3)],
            vec![phi(3), phi(1), phi(0), phi(2)],
            vec![phi(1), phi(3), phi(2), phi(0)],
        ];
        assert_eq!(cz, IntMatrix::block_assemble(&grid).unwrap());
    }

    #[test]
    fn row_sums_and_blocks() {
        for q in [2u64, 3, 4, 5] {
            let s = f(q);
            let qq = q as usize;
            for a in s.elements() {
                let c = aux_matrix(&s, AuxLabel::Field(a)).unwrap();
                assert!(c.is_zero_one());
                assert!(c.row_sums().iter().all(|&r| r == q as i64));
                for bi in 0..qq {
                    for bj in 0..qq {
                        for r in 0..qq {
                            let ones: i64 = (0..qq).map(|k| c.get(bi * qq + r, bj * qq + k)).sum();
                            assert_eq!(ones, 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn identities_hold() {
        for q in [2, 3, 4, 5] {
            let rep = check_aux_identities(&AuxFamily::new(&f(q)).unwrap()).unwrap();
            assert!(rep.all_passed(), "q = {q}: {rep:?}");
            assert_eq!(rep.clauses.len(), 5);
        }
    }

    #[test]
    fn flipped_bit_breaks_square_clause() {
        let s = f(3);
        let mut fam = AuxFamily::new(&s).unwrap();
        let one = AuxLabel::Field(FieldElement::ONE);
        let c1 = fam.get(one).clone();
        fam.set(one, c1.with_entry(0, 0, 1 - c1.get(0, 0))).unwrap();
        let rep = check_aux_identities(&fam).unwrap();
        let sq = rep.clause("square_scaling").unwrap();
        assert!(!sq.passed);
        assert!(sq.witness.as_ref().unwrap().context.contains("a=1"));
    }

    #[test]
    fn block_identity_fails_for_y() {
        let s = f(3);
        let iq_jq = IntMatrix::identity(3).kronecker(&IntMatrix::all_ones(3)).unwrap();
        let cy = aux_matrix(&s, AuxLabel::Y).unwrap();
        let prod = iq_jq.mat_mul(&cy).unwrap();
        assert_ne!(prod, IntMatrix::all_ones(9));
        assert_eq!(prod, cy.scale(3).unwrap());
    }

    #[test]
    fn label_text_round_trip() {
        for l in [AuxLabel::X, AuxLabel::Y, AuxLabel::Field(FieldElement(3))] {
            assert_eq!(l.to_string().parse::<AuxLabel>().unwrap(), l);
            let js = serde_json::to_string(&l).unwrap();
            assert_eq!(serde_json::from_str::<AuxLabel>(&js).unwrap(), l);
        }
        assert!("w".parse::<AuxLabel>().is_err());
    }
}
