//! Translation schemes on a product of finite fields' additive groups.
//!
//! Group elements are encoded in mixed radix with the first factor most
//! significant, so on 𝔽_r × 𝔽_q × 𝔽_q the element (β, α1, α2) has index
//! β·q² + α1·q + α2.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::SchemeInstance;
use crate::check::{Clause, ClauseBuilder, Witness};
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::int_linalg::IntMatrix;

/// One relation given by its neighbourhood of zero, N_i = R_i(0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub label: String,
    /// Encoded group elements, sorted ascending.
    pub elements: Vec<usize>,
}

impl Relation {
    pub fn new(label: impl Into<String>, mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self { label: label.into(), elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// A partition of an abelian group G = F_1 × … × F_t into relation sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationData {
    factors: Vec<FieldSpec>,
    relations: Vec<Relation>,
    /// Relation index of each group element.
    class_of: Vec<usize>,
}

impl TranslationData {
    /// Validates that the first relation is {0} and that the relations
    /// partition the group.
    pub fn new(factors: Vec<FieldSpec>, relations: Vec<Relation>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("a translation scheme needs at least one factor".into()));
        }
        let order: usize = factors.iter().map(|f| f.order() as usize).product();
        match relations.first() {
            Some(r) if r.elements == [0] => {}
            _ => return Err(Error::InvalidParameter("the first relation must be {0}".into())),
        }
        let mut class_of = vec![usize::MAX; order];
        for (i, rel) in relations.iter().enumerate() {
            for &x in &rel.elements {
                if x >= order {
                    return Err(Error::InvalidParameter(format!(
                        "element {x} of {} is outside a group of order {order}",
                        rel.label
                    )));
                }
                if class_of[x] != usize::MAX {
                    return Err(Error::InvalidParameter(format!(
                        "element {x} lies in both {} and {}",
                        relations[class_of[x]].label, rel.label
                    )));
                }
                class_of[x] = i;
            }
        }
        if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidParameter(format!("element {x} lies in no relation")));
        }
        Ok(Self { factors, relations, class_of })
    }

    pub fn factors(&self) -> &[FieldSpec] {
        &self.factors
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn order(&self) -> usize {
        self.class_of.len()
    }

    /// Relation index containing the encoded element `x`.
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn encode(&self, parts: &[FieldElement]) -> usize {
        encode(&self.factors, parts)
    }

    pub fn decode(&self, x: usize) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.factors.len()];
        let mut rest = x;
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            let q = f.order() as usize;
            *slot = FieldElement((rest % q) as u32);
            rest /= q;
        }
        out
    }

    fn combine(
        &self,
        x: usize,
        y: usize,
        op: impl Fn(&FieldSpec, FieldElement, FieldElement) -> FieldElement,
    ) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let parts: Vec<_> = self.factors.iter().zip(a.into_iter().zip(b)).map(|(f, (s, t))| op(f, s, t)).collect();
        self.encode(&parts)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.combine(x, y, |f, s, t| f.add(s, t))
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.combine(x, y, |f, s, t| f.sub(s, t))
    }

    /// Additive generators: the unit coefficient vectors of every factor.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let mut pk = 1u32;
            for _ in 0..f.degree() {
                let mut parts = vec![FieldElement::ZERO; self.factors.len()];
                parts[i] = FieldElement(pk);
                out.push(self.encode(&parts));
                pk *= f.characteristic();
            }
        }
        out
    }

    /// A_i[x][y] = 1 iff y − x ∈ N_i.
    pub fn class_matrices(&self) -> Vec<(String, IntMatrix)> {
        let v = self.order();
        let diff: Vec<Vec<usize>> = (0..v).map(|x| (0..v).map(|y| self.sub(y, x)).collect()).collect();
        self.relations
            .iter()
            .enumerate()
            .map(|(i, rel)| {
                let m = IntMatrix::from_fn(v, v, |x, y| (self.class_of[diff[x][y]] == i) as i64);
                (rel.label.clone(), m)
            })
            .collect()
    }

    pub fn scheme(&self) -> Result<SchemeInstance> {
        SchemeInstance::new(self.class_matrices())
    }

    /// Smallest n such that every character value lies in Q(ζ_n): the lcm
    /// of the factor characteristics.
    pub fn ambient_order(&self) -> u32 {
        self.factors.iter().fold(1u32, |acc, f| acc.lcm(&f.characteristic()))
    }

    /// Per-factor tables t_f[a][b] = exponent of χ_f(ab) in Q(ζ_n).
    pub(crate) fn exponent_tables(&self) -> Result<Vec<Vec<Vec<u32>>>> {
        let n = self.ambient_order();
        self.factors
            .iter()
            .map(|f| {
                f.elements().map(|a| f.elements().map(|b| f.character_exponent(f.mul(a, b), n)).collect()).collect()
            })
            .collect()
    }

    /// Exponent k with χ_c(x) = ζ_n^k, where χ_c(x) = Π_f χ_f(c_f·x_f).
    pub fn character_exponent(&self, c: usize, x: usize) -> Result<u32> {
        let tables = self.exponent_tables()?;
        Ok(exponent_with(&tables, &self.decode(c), &self.decode(x), self.ambient_order()))
    }
}

pub(crate) fn encode(factors: &[FieldSpec], parts: &[FieldElement]) -> usize {
    assert_eq!(parts.len(), factors.len(), "one component per factor");
    parts.iter().zip(factors).fold(0, |acc, (a, f)| acc * f.order() as usize + a.index())
}

pub(crate) fn exponent_with(tables: &[Vec<Vec<u32>>], c: &[FieldElement], x: &[FieldElement], n: u32) -> u32 {
    tables.iter().zip(c.iter().zip(x)).fold(0u32, |acc, (t, (a, b))| (acc + t[a.index()][b.index()]) % n)
}

/// Fails with `ConstructionMismatch` unless every class matrix of
/// `scheme` equals the matrix its relation set generates, label by label.
pub fn ensure_matches_relations(scheme: &SchemeInstance, t: &TranslationData) -> Result<()> {
    let generated = t.class_matrices();
    if generated.len() != scheme.len() {
        return Err(Error::ConstructionMismatch(format!(
            "{} classes but {} relation sets",
            scheme.len(),
            generated.len()
        )));
    }
    for (class, (label, m)) in scheme.classes().iter().zip(&generated) {
        if class.label != *label {
            return Err(Error::ConstructionMismatch(format!("class {} paired with relation {label}", class.label)));
        }
        if let Some((i, j)) = class.matrix.first_difference(m) {
            return Err(Error::ConstructionMismatch(format!(
                "class {label}: matrix and relation set differ at ({i}, {j})"
            )));
        }
    }
    Ok(())
}

/// Checks A[x][y] = A[x+z][y+z] for every class, every cell and every
/// additive generator z.
pub fn check_translation_invariance(scheme: &SchemeInstance, t: &TranslationData) -> Clause {
    let mut b = ClauseBuilder::new("translation invariance");
    let v = scheme.vertex_count();
    if v != t.order() {
        return Clause::fail(
            "translation invariance",
            None,
            format!("{v} vertices but the group has order {}", t.order()),
        );
    }
    for z in t.generators() {
        let shift: Vec<usize> = (0..v).map(|x| t.add(x, z)).collect();
        for class in scheme.classes() {
            let m = &class.matrix;
            let bad = (0..v).find_map(|x| (0..v).find(|&y| m.get(x, y) != m.get(shift[x], shift[y])).map(|y| (x, y)));
            if let Some((x, y)) = bad {
                b.fail_with(
                    Witness {
                        context: format!("{} shifted by element {z}", class.label),
                        row: x,
                        col: y,
                        expected: m.get(x, y),
                        found: m.get(shift[x], shift[y]),
                    },
                    format!("{} is not invariant under translation", class.label),
                );
                return b.finish();
            }
            b.expect(true, String::new);
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_like() -> TranslationData {
        // 𝔽_2 × 𝔽_2 split into its three nonzero elements
        let f = FieldSpec::new(2, 1).unwrap();
        TranslationData::new(
            vec![f.clone(), f],
            vec![Relation::new("R0", vec![0]), Relation::new("a", vec![1]), Relation::new("b", vec![2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn encoding_round_trip() {
        let q = FieldSpec::new(3, 1).unwrap();
        let r = FieldSpec::new(5, 1).unwrap();
        let t = TranslationData::new(
            vec![r, q.clone(), q],
            vec![Relation::new("R0", vec![0]), Relation::new("rest", (1..45).collect())],
        )
        .unwrap();
        for x in 0..45 {
            assert_eq!(t.encode(&t.decode(x)), x);
        }
        assert_eq!(t.decode(2 * 9 + 3 + 2), vec![FieldElement(2), FieldElement(1), FieldElement(2)]);
        assert_eq!(t.ambient_order(), 15);
        assert_eq!(t.generators(), vec![9, 3, 1]);
    }

    #[test]
    fn partition_validation() {
        let f = FieldSpec::new(3, 1).unwrap();
        let bad = |rels| TranslationData::new(vec![f.clone()], rels).is_err();
        assert!(bad(vec![Relation::new("a", vec![1]), Relation::new("b", vec![0, 2])]));
        assert!(bad(vec![Relation::new("a", vec![0]), Relation::new("b", vec![1])]));
        assert!(bad(vec![Relation::new("a", vec![0]), Relation::new("b", vec![1, 2]), Relation::new("c", vec![2])]));
        assert!(!bad(vec![Relation::new("a", vec![0]), Relation::new("b", vec![1, 2])]));
    }

    #[test]
    fn matrices_are_translation_invariant() {
        let t = z4_like();
        let s = t.scheme().unwrap();
        assert!(check_translation_invariance(&s, &t).passed);
        let total = s.classes().iter().try_fold(IntMatrix::zero(4, 4), |acc, c| acc.add(&c.matrix)).unwrap();
        assert!(total.mat_eq(&IntMatrix::all_ones(4)));
        let broken = s.with_matrix(1, s.matrix(1).with_entry(0, 2, 1));
        let c = check_translation_invariance(&broken, &t);
        assert!(!c.passed && c.witness.is_some());
    }

    #[test]
    fn character_exponents_multiply() {
        let f = FieldSpec::new(2, 2).unwrap();
        let g = FieldSpec::new(3, 1).unwrap();
        let t = TranslationData::new(
            vec![f, g],
            vec![Relation::new("R0", vec![0]), Relation::new("rest", (1..12).collect())],
        )
        .unwrap();
        let n = t.ambient_order();
        assert_eq!(n, 6);
        for c in 0..12 {
            for x in 0..12 {
                for y in 0..12 {
                    let lhs = t.character_exponent(c, t.add(x, y)).unwrap();
                    let rhs = (t.character_exponent(c, x).unwrap() + t.character_exponent(c, y).unwrap()) % n;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
