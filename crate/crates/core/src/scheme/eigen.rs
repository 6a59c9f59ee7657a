//! Exact first and second eigenmatrices of translation schemes.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::translation::exponent_with;
use super::{SchemeInstance, TranslationData};
use crate::check::{Clause, ClauseBuilder};
use crate::error::{Error, Result};
use crate::exact_arith::{CycloField, Cyclotomic, Rational};
use crate::finite_field::FieldElement;

/// A square matrix of cyclotomic numbers with labelled rows and columns.
///
/// For a first eigenmatrix P the rows are eigenspaces, the columns are
/// relations and `multiplicities` holds the eigenspace dimensions. For a
/// second eigenmatrix Q the roles swap: rows are relations, columns are
/// eigenspaces, and `multiplicities` holds the relation valencies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenmatrix {
    pub order: u32,
    pub row_labels: Vec<String>,
    pub multiplicities: Vec<i64>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<Cyclotomic>>,
}

impl Eigenmatrix {
    pub fn new(
        order: u32,
        row_labels: Vec<String>,
        multiplicities: Vec<i64>,
        col_labels: Vec<String>,
        entries: Vec<Vec<Cyclotomic>>,
    ) -> Result<Self> {
        let d = row_labels.len();
        let shape_ok = multiplicities.len() == d
            && col_labels.len() == d
            && entries.len() == d
            && entries.iter().all(|r| r.len() == d && r.iter().all(|e| e.order() == order));
        if !shape_ok {
            return Err(Error::ShapeMismatch {
                op: "eigenmatrix",
                left: (d, d),
                right: (entries.len(), entries.first().map_or(0, Vec::len)),
            });
        }
        Ok(Self { order, row_labels, multiplicities, col_labels, entries })
    }

    pub fn size(&self) -> usize {
        self.row_labels.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &Cyclotomic {
        &self.entries[row][col]
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.row_labels.iter().position(|l| l == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.col_labels.iter().position(|l| l == label)
    }

    /// Same matrix with rows and columns rearranged to the given label order.
    pub fn reordered(&self, rows: &[String], cols: &[String]) -> Result<Self> {
        let find = |labels: &[String], wanted: &[String], what: &str| -> Result<Vec<usize>> {
            if wanted.len() != labels.len() {
                return Err(Error::InvalidParameter(format!("{what} order has the wrong length")));
            }
            wanted
                .iter()
                .map(|w| {
                    labels
                        .iter()
                        .position(|l| l == w)
                        .ok_or_else(|| Error::InvalidParameter(format!("unknown {what} label {w}")))
                })
                .collect()
        };
        let ri = find(&self.row_labels, rows, "row")?;
        let ci = find(&self.col_labels, cols, "column")?;
        Ok(Self {
            order: self.order,
            row_labels: rows.to_vec(),
            multiplicities: ri.iter().map(|&r| self.multiplicities[r]).collect(),
            col_labels: cols.to_vec(),
            entries: ri.iter().map(|&r| ci.iter().map(|&c| self.entries[r][c].clone()).collect()).collect(),
        })
    }

    /// Renames rows and columns through the given maps; unmapped labels stay.
    pub fn relabeled(&self, rows: &HashMap<String, String>, cols: &HashMap<String, String>) -> Self {
        let map = |labels: &[String], m: &HashMap<String, String>| {
            labels.iter().map(|l| m.get(l).cloned().unwrap_or_else(|| l.clone())).collect()
        };
        Self { row_labels: map(&self.row_labels, rows), col_labels: map(&self.col_labels, cols), ..self.clone() }
    }

    /// First (row label, column label) where the two matrices disagree when
    /// compared label by label, or a description of a label-set mismatch.
    pub fn difference_by_label(&self, other: &Self) -> Option<String> {
        let other = match other.reordered(&self.row_labels, &self.col_labels) {
            Ok(o) => o,
            Err(e) => return Some(e.to_string()),
        };
        if self.multiplicities != other.multiplicities {
            return Some(format!("multiplicities {:?} vs {:?}", self.multiplicities, other.multiplicities));
        }
        for (r, (a, b)) in self.entries.iter().zip(&other.entries).enumerate() {
            for (c, (x, y)) in a.iter().zip(b).enumerate() {
                if x != y {
                    return Some(format!("entry ({}, {}): {x} vs {y}", self.row_labels[r], self.col_labels[c]));
                }
            }
        }
        None
    }

    pub fn equals_by_label(&self, other: &Self) -> bool {
        self.difference_by_label(other).is_none()
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|r| r.iter().map(Cyclotomic::conj).collect()).collect(),
            ..self.clone()
        }
    }

    fn product(&self, other: &Self) -> Result<Vec<Vec<Cyclotomic>>> {
        let d = self.size();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d).try_fold(Cyclotomic::zero(self.order), |acc, k| {
                            acc.try_add(&self.entries[i][k].try_mul(&other.entries[k][j])?)
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// A first eigenmatrix computed from characters, with the characters
/// (encoded like group elements) spanning each eigenspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterEigen {
    pub eigenmatrix: Eigenmatrix,
    pub row_characters: Vec<Vec<usize>>,
}

impl CharacterEigen {
    /// Eigenspace row containing the character `c`.
    pub fn row_of_character(&self, c: usize) -> Option<usize> {
        self.row_characters.iter().position(|cs| cs.binary_search(&c).is_ok())
    }

    /// Renames each eigenspace by a labelling of characters. Every
    /// character of a row must receive the same label and distinct rows
    /// distinct labels; otherwise the labelling does not describe the
    /// eigenspaces and an error names the offending character.
    pub fn labeled(
        &self,
        t: &TranslationData,
        label: impl Fn(&[FieldElement]) -> Result<String>,
    ) -> Result<Eigenmatrix> {
        let mut names = Vec::with_capacity(self.row_characters.len());
        for (row, chars) in self.row_characters.iter().enumerate() {
            let name = label(&t.decode(chars[0]))?;
            if let Some(&c) = chars.iter().find(|&&c| label(&t.decode(c)).ok().as_ref() != Some(&name)) {
                return Err(Error::ConstructionMismatch(format!(
                    "eigenspace {} holds characters {} and {c} with different labels",
                    self.eigenmatrix.row_labels[row], chars[0]
                )));
            }
            if names.contains(&name) {
                return Err(Error::ConstructionMismatch(format!("label {name} covers two eigenspaces")));
            }
            names.push(name);
        }
        Ok(Eigenmatrix { row_labels: names, ..self.eigenmatrix.clone() })
    }
}

/// p_{ij} = Σ_{x∈N_i} χ(x) for every character χ, grouped into eigenspaces
/// by exact equality of the resulting rows.
///
/// Rows are ordered with the trivial character first, then by descending
/// multiplicity, ties broken by comparing entries' coefficient vectors.
/// Row labels are `E0`, `E1`, … in that order.
pub fn eigenmatrix_from_characters(t: &TranslationData) -> Result<CharacterEigen> {
    let n = t.ambient_order();
    let field = CycloField::get(n);
    let tables = t.exponent_tables()?;
    let v = t.order();
    let decoded: Vec<_> = (0..v).map(|x| t.decode(x)).collect();
    let rel_count = t.relations().len();

    let rows: Vec<Vec<Vec<i64>>> = (0..v)
        .into_par_iter()
        .map(|c| {
            (0..rel_count)
                .map(|i| {
                    let mut counts = vec![0i64; n as usize];
                    for &x in &t.relations()[i].elements {
                        counts[exponent_with(&tables, &decoded[c], &decoded[x], n) as usize] += 1;
                    }
                    field.collapse_counts(&counts)
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let mut groups: Vec<(Vec<Vec<i64>>, Vec<usize>)> = Vec::new();
    let mut index: HashMap<&Vec<Vec<i64>>, usize> = HashMap::new();
    for (c, key) in rows.iter().enumerate() {
        match index.get(key) {
            Some(&g) => groups[g].1.push(c),
            None => {
                index.insert(key, groups.len());
                groups.push((key.clone(), vec![c]));
            }
        }
    }

    let mut built: Vec<(Vec<Cyclotomic>, Vec<usize>)> = groups
        .into_iter()
        .map(|(key, chars)| {
            let entries = key.iter().map(|co| Cyclotomic::from_int_coeffs(n, co)).collect::<Result<_>>()?;
            Ok((entries, chars))
        })
        .collect::<Result<_>>()?;
    built.sort_by(|(ea, ca), (eb, cb)| {
        let trivial = |cs: &Vec<usize>| cs.first() != Some(&0);
        trivial(ca).cmp(&trivial(cb)).then(cb.len().cmp(&ca.len())).then_with(|| {
            ea.iter().zip(eb).map(|(x, y)| x.cmp_coeffs(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });

    let row_labels = (0..built.len()).map(|i| format!("E{i}")).collect();
    let multiplicities = built.iter().map(|(_, cs)| cs.len() as i64).collect();
    let col_labels = t.relations().iter().map(|r| r.label.clone()).collect();
    let (entries, row_characters): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    let eigenmatrix = Eigenmatrix::new(n, row_labels, multiplicities, col_labels, entries)?;
    Ok(CharacterEigen { eigenmatrix, row_characters })
}

/// Inverse of a square cyclotomic matrix by Gauss–Jordan elimination.
fn invert(m: &[Vec<Cyclotomic>], order: u32) -> Result<Vec<Vec<Cyclotomic>>> {
    let d = m.len();
    let mut a: Vec<Vec<Cyclotomic>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| Cyclotomic::from_int(order, (i == j) as i64)));
            r
        })
        .collect();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, pivot);
        let inv = a[col][col].inverse()?;
        a[col] = a[col].iter().map(|x| x.try_mul(&inv)).collect::<Result<_>>()?;
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.try_sub(&f.try_mul(p)?)?;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// Q = v·P⁻¹, returned only after confirming PQ = QP = vI exactly.
pub fn second_eigenmatrix(p: &Eigenmatrix, v: usize) -> Result<Eigenmatrix> {
    let n = p.order;
    let scale = Rational::from_integer((v as i64).into());
    let inv = invert(&p.entries, n)?;
    let entries: Vec<Vec<Cyclotomic>> = inv.iter().map(|r| r.iter().map(|x| x.scale(&scale)).collect()).collect();
    // q_{i0} = 1 for the trivial eigenspace column, so row 0 of P gives the
    // valencies carried alongside Q's rows.
    let valencies = p.entries[0]
        .iter()
        .map(|x| x.as_integer().ok_or_else(|| Error::InvalidParameter("valency row is not integral".into())))
        .collect::<Result<_>>()?;
    let q = Eigenmatrix::new(n, p.col_labels.clone(), valencies, p.row_labels.clone(), entries)?;
    let vi = |i: usize, j: usize| Cyclotomic::from_int(n, if i == j { v as i64 } else { 0 });
    for prod in [p.product(&q)?, q.product(p)?] {
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if *x != vi(i, j) {
                    return Err(Error::ConstructionMismatch(format!("PQ ≠ vI at ({i}, {j})")));
                }
            }
        }
    }
    Ok(q)
}

/// Recomputes each multiplicity as m_j = v / Σ_i |p_{ji}|²/k_i and compares
/// with the stored character count.
pub fn multiplicities_check(p: &Eigenmatrix, v: usize) -> Result<Clause> {
    let mut b = ClauseBuilder::new("multiplicities");
    let vals: Vec<Rational> = p.entries[0]
        .iter()
        .map(|k| k.as_rational().cloned().ok_or_else(|| Error::InvalidParameter("valency is not rational".into())))
        .collect::<Result<_>>()?;
    for (j, row) in p.entries.iter().enumerate() {
        // each |p|² is real but only the full sum is guaranteed rational
        let mut s = Cyclotomic::zero(p.order);
        for (x, k) in row.iter().zip(&vals) {
            s = s.try_add(&x.try_mul(&x.conj())?.scale(&k.recip()))?;
        }
        let Some(s) = s.as_rational().filter(|s| **s != Rational::from_integer(0.into())) else {
            b.expect(false, || format!("{}: Σ|p|²/k is not a nonzero rational", p.row_labels[j]));
            continue;
        };
        let m = Rational::from_integer((v as i64).into()) / s;
        b.expect(m == Rational::from_integer(p.multiplicities[j].into()), || {
            format!("{}: orthogonality gives {m}, characters give {}", p.row_labels[j], p.multiplicities[j])
        });
    }
    b.expect(p.multiplicities.iter().sum::<i64>() == v as i64, || "multiplicities do not sum to v".into());
    Ok(b.finish())
}

/// Brute-force eigenvector oracle: for every class A_i and character χ,
/// checks (A_iχ)(x) = p_{ij}χ(x) at every vertex x, with j the eigenspace
/// of χ. Uses the class matrices only, not the relation sets.
pub fn verify_eigenvectors(scheme: &SchemeInstance, t: &TranslationData, ce: &CharacterEigen) -> Result<Clause> {
    let n = t.ambient_order();
    let field = CycloField::get(n);
    let tables = t.exponent_tables()?;
    let v = t.order();
    let decoded: Vec<_> = (0..v).map(|x| t.decode(x)).collect();
    let p = &ce.eigenmatrix;
    let col_of: Vec<usize> = scheme
        .labels()
        .iter()
        .map(|l| p.col_index(l).ok_or_else(|| Error::InvalidParameter(format!("no eigenmatrix column {l}"))))
        .collect::<Result<_>>()?;

    let failures: Vec<Option<String>> = (0..v)
        .into_par_iter()
        .map(|c| -> Result<Option<String>> {
            let j =
                ce.row_of_character(c).ok_or_else(|| Error::InvalidParameter(format!("character {c} unassigned")))?;
            let chi: Vec<u32> = (0..v).map(|y| exponent_with(&tables, &decoded[c], &decoded[y], n)).collect();
            for (i, class) in scheme.classes().iter().enumerate() {
                let pij = p.entry(j, col_of[i]);
                for x in 0..v {
                    let mut counts = vec![0i64; n as usize];
                    for (y, &a) in class.matrix.row(x).iter().enumerate() {
                        if a != 0 {
                            counts[chi[y] as usize] += a;
                        }
                    }
                    let lhs = Cyclotomic::from_int_coeffs(n, &field.collapse_counts(&counts)?)?;
                    let rhs = pij.try_mul(&Cyclotomic::zeta_pow(n, chi[x] as i64))?;
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "{} applied to character {c} differs at vertex {x}: {lhs} vs {rhs}",
                            class.label
                        )));
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;

    let mut b = ClauseBuilder::new("eigenvectors");
    for f in failures {
        b.expect(f.is_none(), || f.unwrap_or_default());
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::FieldSpec;
    use crate::scheme::Relation;

    fn cyclic5() -> TranslationData {
        // Paley-type split of 𝔽_5: squares {1,4} and non-squares {2,3}
        let f = FieldSpec::new(5, 1).unwrap();
        TranslationData::new(
            vec![f],
            vec![Relation::new("R0", vec![0]), Relation::new("sq", vec![1, 4]), Relation::new("ns", vec![2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn pentagon_eigenmatrix() {
        let t = cyclic5();
        let ce = eigenmatrix_from_characters(&t).unwrap();
        let p = &ce.eigenmatrix;
        assert_eq!(p.size(), 3);
        assert_eq!(p.multiplicities, vec![1, 2, 2]);
        let ints: Vec<i64> = p.entries[0].iter().map(|x| x.as_integer().unwrap()).collect();
        assert_eq!(ints, vec![1, 2, 2]);
        // the nontrivial eigenvalues of the pentagon are (−1 ± √5)/2
        let z = |k| Cyclotomic::zeta_pow(5, k);
        let a = &z(1) + &z(4);
        let b = &z(2) + &z(3);
        let rows: Vec<_> = p.entries[1..].iter().map(|r| (r[1].clone(), r[2].clone())).collect();
        assert!(rows.contains(&(a.clone(), b.clone())) && rows.contains(&(b, a)));
        assert!(multiplicities_check(p, 5).unwrap().passed);
        let q = second_eigenmatrix(p, 5).unwrap();
        assert_eq!(q.multiplicities, vec![1, 2, 2]);
        assert!(verify_eigenvectors(&t.scheme().unwrap(), &t, &ce).unwrap().passed);
    }

    #[test]
    fn trivial_rank_one() {
        let one = Cyclotomic::one(1);
        let p = Eigenmatrix::new(1, vec!["E0".into()], vec![1], vec!["R0".into()], vec![vec![one.clone()]]).unwrap();
        let q = second_eigenmatrix(&p, 1).unwrap();
        assert_eq!(q.entries, vec![vec![one]]);
        assert!(multiplicities_check(&p, 1).unwrap().passed);
    }

    #[test]
    fn singular_matrix_rejected() {
        let one = Cyclotomic::one(1);
        let p = Eigenmatrix::new(
            1,
            vec!["a".into(), "b".into()],
            vec![1, 1],
            vec!["c".into(), "d".into()],
            vec![vec![one.clone(), one.clone()], vec![one.clone(), one]],
        )
        .unwrap();
        assert!(matches!(second_eigenmatrix(&p, 2), Err(Error::Singular)));
    }

    #[test]
    fn wrong_eigenvalue_is_caught() {
        let t = cyclic5();
        let mut ce = eigenmatrix_from_characters(&t).unwrap();
        ce.eigenmatrix.entries[1][1] = Cyclotomic::from_int(5, 7);
        let c = verify_eigenvectors(&t.scheme().unwrap(), &t, &ce).unwrap();
        assert!(!c.passed);
        ce.eigenmatrix.multiplicities[1] = 3;
        assert!(!multiplicities_check(&ce.eigenmatrix, 5).unwrap().passed);
    }

    #[test]
    fn label_comparison_and_reorder() {
        let p = eigenmatrix_from_characters(&cyclic5()).unwrap().eigenmatrix;
        let rows: Vec<String> = p.row_labels.iter().rev().cloned().collect();
        let cols: Vec<String> = p.col_labels.iter().rev().cloned().collect();
        let r = p.reordered(&rows, &cols).unwrap();
        assert!(p.equals_by_label(&r));
        assert_ne!(p, r);
        let swap: HashMap<String, String> =
            [("E1".to_string(), "E2".to_string()), ("E2".to_string(), "E1".to_string())].into();
        assert!(!p.equals_by_label(&p.relabeled(&swap, &HashMap::new())));
    }
}
