//! A 4-class translation scheme on 𝔽_q × 𝔽_{q+2} built from quadratic
//! characters, and the twin prime power difference set it contains.
//!
//! Vertices (x, y) are encoded as x·(q+2) + y.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::incidence::relation_label;
use crate::scheme::{Relation, SchemeInstance, TranslationData};

fn fields(q: u64) -> Result<(FieldSpec, FieldSpec)> {
    if q.is_multiple_of(2) {
        return Err(Error::EvenOrder(q));
    }
    Ok((FieldSpec::of_order(q)?, FieldSpec::of_order(q + 2)?))
}

/// The relation sets R_i(0) on 𝔽_q × 𝔽_{q+2}, with η the quadratic
/// characters:
///
/// - N1 = {(x, y) : η(−x)η(−y) = 1};
/// - N2 = {(x, y) : η(−x)η(−y) = −1};
/// - N3 = {(x, 0) : x ≠ 0};
/// - N4 = {(0, y) : y ≠ 0}.
///
/// Since exactly one of q, q+2 is 1 mod 4, N1 = {η(x)η(y) = −1}.
pub fn build_intro_relations(q: u64) -> Result<TranslationData> {
    let (fq, fr) = fields(q)?;
    let width = fr.order() as usize;
    let mut sets: [Vec<usize>; 5] = Default::default();
    for x in fq.elements() {
        let cx = fq.quadratic_character(fq.neg(x))?;
        for y in fr.elements() {
            let cy = fr.quadratic_character(fr.neg(y))?;
            let class = match (x.is_zero(), y.is_zero()) {
                (true, true) => 0,
                (false, true) => 3,
                (true, false) => 4,
                (false, false) if cx * cy == 1 => 1,
                (false, false) => 2,
            };
            sets[class].push(x.index() * width + y.index());
        }
    }
    let relations = sets.into_iter().enumerate().map(|(i, s)| Relation::new(relation_label(None, i), s)).collect();
    TranslationData::new(vec![fq, fr], relations)
}

/// The scheme generated by [`build_intro_relations`].
pub fn intro_scheme(q: u64) -> Result<SchemeInstance> {
    build_intro_relations(q)?.scheme()
}

/// R_0(0) ∪ R_1(0) ∪ R_3(0).
pub fn intro_difference_subset(t: &TranslationData) -> Vec<usize> {
    let mut d: Vec<usize> = [0, 1, 3].iter().flat_map(|&i| t.relations()[i].elements.iter().copied()).collect();
    d.sort_unstable();
    d
}

/// Parameters (v, k, λ) = (q(q+2), (q²+2q−1)/2, (q+3)(q−1)/4).
pub fn expected_difference_parameters(q: u64) -> (u64, u64, u64) {
    (q * (q + 2), (q * q + 2 * q - 1) / 2, (q + 3) * (q - 1) / 4)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceSetReport {
    pub v: u64,
    pub k: u64,
    /// Common count of every nonzero difference, when there is one.
    pub lambda: Option<u64>,
    /// How many nonzero group elements occur exactly c times, keyed by c.
    pub histogram: BTreeMap<u64, u64>,
    pub verified: bool,
}

/// Counts every ordered difference d − d′ (d ≠ d′) of the subset and checks
/// that all nonzero elements occur equally often.
pub fn verify_difference_set(subset: &[usize], group: &TranslationData) -> Result<DifferenceSetReport> {
    if subset.is_empty() {
        return Err(Error::InvalidParameter("the subset is empty".into()));
    }
    let v = group.order();
    if let Some(&x) = subset.iter().find(|&&x| x >= v) {
        return Err(Error::InvalidParameter(format!("element {x} is outside a group of order {v}")));
    }
    let mut set = subset.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut counts = vec![0u64; v];
    for &a in &set {
        for &b in &set {
            if a != b {
                counts[group.sub(a, b)] += 1;
            }
        }
    }
    let mut histogram = BTreeMap::new();
    for &c in &counts[1..] {
        *histogram.entry(c).or_insert(0) += 1;
    }
    let lambda = (histogram.len() == 1).then(|| *histogram.keys().next().expect("one entry"));
    Ok(DifferenceSetReport { v: v as u64, k: set.len() as u64, lambda, verified: lambda.is_some(), histogram })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::verify_axioms;

    #[test]
    fn q3_sizes() {
        let t = build_intro_relations(3).unwrap();
        let sizes: Vec<usize> = t.relations().iter().map(Relation::len).collect();
        assert_eq!(sizes, vec![1, 4, 4, 2, 4]);
    }

    #[test]
    fn even_q_is_rejected() {
        assert!(matches!(build_intro_relations(2), Err(Error::EvenOrder(2))));
        assert!(build_intro_relations(13).is_err());
    }

    #[test]
    fn difference_sets() {
        for q in [3, 5] {
            let t = build_intro_relations(q).unwrap();
            let r = verify_difference_set(&intro_difference_subset(&t), &t).unwrap();
            let (v, k, l) = expected_difference_parameters(q);
            assert!(r.verified);
            assert_eq!((r.v, r.k, r.lambda), (v, k, Some(l)));
        }
        assert_eq!(expected_difference_parameters(5), (35, 17, 8));
    }

    #[test]
    fn whole_group_is_trivial_design() {
        let t = build_intro_relations(3).unwrap();
        let all: Vec<usize> = (0..15).collect();
        let r = verify_difference_set(&all, &t).unwrap();
        assert_eq!((r.k, r.lambda), (15, Some(15)));
    }

    #[test]
    fn random_subset_is_not_a_difference_set() {
        use rand::rngs::StdRng;
        use rand::seq::index::sample;
        use rand::SeedableRng;
        let t = build_intro_relations(3).unwrap();
        let mut rng = StdRng::seed_from_u64(15);
        let misses = (0..20)
            .filter(|_| !verify_difference_set(&sample(&mut rng, 15, 7).into_vec(), &t).unwrap().verified)
            .count();
        assert!(misses >= 19, "only {misses} of 20 random 7-subsets failed");
    }

    #[test]
    fn scheme_axioms() {
        let s = intro_scheme(3).unwrap();
        assert!(verify_axioms(&s).unwrap().all_passed());
    }
}
