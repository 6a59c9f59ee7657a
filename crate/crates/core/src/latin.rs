//! Latin squares L_β(β′, β″) = β(β″ − β′) over GF(r), mutual suitability,
//! and the permutation components P_{β,γ} with L_β = Σ_γ γ P_{β,γ}.
//!
//! Suitability is the row-superimposition property; it is equivalent to
//! the existence of mutually orthogonal Latin squares of the same order,
//! which this crate does not construct.

use std::collections::{HashMap, HashSet};
use std::fmt::Display;
use std::hash::Hash;
use std::io::Write;

use crate::check::{CheckReport, ClauseBuilder};
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::int_linalg::{lin_comb, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare<S = FieldElement> {
    cells: Vec<Vec<S>>,
}

impl<S: Clone + Eq + Hash> LatinSquare<S> {
    /// Validates that every row and column is a permutation of one symbol set.
    pub fn new(cells: Vec<Vec<S>>) -> Result<Self> {
        let r = cells.len();
        if cells.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidParameter("latin square must be square".into()));
        }
        if let Some(first) = cells.first() {
            let symbols: HashSet<&S> = first.iter().collect();
            let line_ok = |line: Vec<&S>| {
                let mut seen = HashSet::new();
                line.into_iter().all(|s| symbols.contains(s) && seen.insert(s))
            };
            let rows_ok = cells.iter().all(|row| line_ok(row.iter().collect()));
            let cols_ok = (0..r).all(|c| line_ok(cells.iter().map(|row| &row[c]).collect()));
            if symbols.len() != r || !rows_ok || !cols_ok {
                return Err(Error::InvalidParameter("not a latin square".into()));
            }
        }
        Ok(Self { cells })
    }

    pub fn order(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, row: usize, col: usize) -> &S {
        &self.cells[row][col]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.cells
    }

    pub fn transpose(&self) -> Self {
        let r = self.order();
        Self { cells: (0..r).map(|c| (0..r).map(|k| self.cells[k][c].clone()).collect()).collect() }
    }

    /// Applies a symbol bijection cellwise. Every symbol must be mapped and
    /// distinct symbols must have distinct images.
    pub fn relabel<T: Clone + Eq + Hash>(&self, map: &HashMap<S, T>) -> Result<LatinSquare<T>> {
        let mut images = HashSet::new();
        for s in self.cells.first().into_iter().flatten() {
            let t = map.get(s).ok_or_else(|| Error::NotBijective("symbol missing from relabelling map".into()))?;
            if !images.insert(t) {
                return Err(Error::NotBijective("relabelling map is not injective".into()));
            }
        }
        let cells = self.cells.iter().map(|row| row.iter().map(|s| map[s].clone()).collect()).collect();
        Ok(LatinSquare { cells })
    }

    /// CSV with one record per row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()>
    where
        S: Display,
    {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for row in &self.cells {
            out.write_record(row.iter().map(ToString::to_string))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// L_β over `spec`, with cell (β′, β″) = β(β″ − β′).
pub fn latin_square(spec: &FieldSpec, beta: FieldElement) -> Result<LatinSquare> {
    if beta.is_zero() || beta.index() >= spec.order() as usize {
        return Err(Error::InvalidParameter(format!("β = {beta} must be a nonzero element")));
    }
    let cells =
        spec.elements().map(|b1| spec.elements().map(|b2| spec.mul(beta, spec.sub(b2, b1))).collect()).collect();
    Ok(LatinSquare { cells })
}

/// Every row of `a` superimposed on every row of `b` (including equal row
/// indices) agrees in exactly one position.
pub fn is_suitable<S: Clone + Eq + Hash>(a: &LatinSquare<S>, b: &LatinSquare<S>) -> Result<bool> {
    if a.order() != b.order() {
        return Err(Error::ShapeMismatch {
            op: "is_suitable",
            left: (a.order(), a.order()),
            right: (b.order(), b.order()),
        });
    }
    Ok(a.rows().iter().all(|ra| b.rows().iter().all(|rb| ra.iter().zip(rb).filter(|(x, y)| x == y).count() == 1)))
}

/// The permutations P_{β,γ}, γ ∈ GF(r), stored as index arrays: part γ
/// sends a to the unique b with β(b − a) = γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermComponents {
    pub beta: FieldElement,
    pub parts: Vec<Vec<usize>>,
}

impl PermComponents {
    pub fn part(&self, gamma: FieldElement) -> &[usize] {
        &self.parts[gamma.index()]
    }

    pub fn matrix(&self, gamma: FieldElement) -> IntMatrix {
        IntMatrix::permutation_matrix(self.part(gamma)).expect("components are permutations")
    }
}

/// Reads P_{β,γ} off a field-derived square: (a, b) belongs to part γ when
/// the cell (a, b) holds γ.
pub fn perm_components(spec: &FieldSpec, beta: FieldElement, l: &LatinSquare) -> Result<PermComponents> {
    let r = l.order();
    if r != spec.order() as usize {
        return Err(Error::InvalidParameter("square order differs from the field order".into()));
    }
    let mut parts = vec![vec![usize::MAX; r]; r];
    for (a, row) in l.rows().iter().enumerate() {
        for (b, g) in row.iter().enumerate() {
            parts[g.index()][a] = b;
        }
    }
    Ok(PermComponents { beta, parts })
}

/// P_{β,γ} computed straight from its defining equation.
pub fn perm_component(spec: &FieldSpec, beta: FieldElement, gamma: FieldElement) -> Result<Vec<usize>> {
    let shift = spec.div(gamma, beta)?;
    Ok(spec.elements().map(|a| spec.add(a, shift).index()).collect())
}

fn compose(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&c| then[c]).collect()
}

/// Exhaustively verifies, for β, β′ ∈ GF(r)* and γ, γ′ ∈ GF(r):
///
/// 1. P_{ββ′,γβ′} = P_{β,γ};
/// 2. P_{β,γ} P_{β′,γ′} = P_{ββ′, βγ′+β′γ};
/// 3. Σ_γ P_{ββ′,(β+β′)γ} is rI when β+β′ = 0 and J otherwise;
/// 4. Σ_{γ≠γ′ nonzero} P_{ββ′,βγ′+β′γ} is (r−2)(J−I) when β+β′ = 0 and
///    2I + (r−3)J otherwise.
pub fn check_perm_calculus(spec: &FieldSpec) -> Result<CheckReport> {
    let r = spec.order() as usize;
    let ri = r as i64;
    let comps: Vec<Vec<Vec<usize>>> =
        spec.elements()
            .map(|b| {
                if b.is_zero() {
                    Ok(Vec::new())
                } else {
                    spec.elements().map(|g| perm_component(spec, b, g)).collect()
                }
            })
            .collect::<Result<_>>()?;
    let p = |b: FieldElement, g: FieldElement| &comps[b.index()][g.index()];
    let pm = |b: FieldElement, g: FieldElement| IntMatrix::permutation_matrix(p(b, g)).expect("perm");
    let (i_r, j_r) = (IntMatrix::identity(r), IntMatrix::all_ones(r));

    let mut scaling = ClauseBuilder::new("scaling_invariance");
    let mut product = ClauseBuilder::new("product_rule");
    let mut full_sum = ClauseBuilder::new("scaled_sum");
    let mut pair_sum = ClauseBuilder::new("distinct_pair_sum");
    for b in spec.nonzero() {
        for b2 in spec.nonzero() {
            let bb = spec.mul(b, b2);
            for g in spec.elements() {
                scaling.expect(p(bb, spec.mul(g, b2)) == p(b, g), || format!("β={b}, β'={b2}, γ={g}"));
                for g2 in spec.elements() {
                    let rhs = p(bb, spec.add(spec.mul(b, g2), spec.mul(b2, g)));
                    product.expect(&compose(p(b, g), p(b2, g2)) == rhs, || format!("β={b}, β'={b2}, γ={g}, γ'={g2}"));
                }
            }
            let ctx = format!("β={b}, β'={b2}");
            let sum_b = spec.add(b, b2);
            let mats: Vec<IntMatrix> = spec.elements().map(|g| pm(bb, spec.mul(sum_b, g))).collect();
            let found = lin_comb(&mats.iter().map(|m| (1, m)).collect::<Vec<_>>())?;
            let expected = if sum_b.is_zero() { i_r.scale(ri)? } else { j_r.clone() };
            full_sum.expect_eq(&ctx, &found, &expected);

            let mut acc = IntMatrix::zero(r, r);
            for g in spec.nonzero() {
                for g2 in spec.nonzero().filter(|&g2| g2 != g) {
                    acc = acc.add(&pm(bb, spec.add(spec.mul(b, g2), spec.mul(b2, g))))?;
                }
            }
            let expected =
                if sum_b.is_zero() { j_r.sub(&i_r)?.scale(ri - 2)? } else { lin_comb(&[(2, &i_r), (ri - 3, &j_r)])? };
            pair_sum.expect_eq(&ctx, &acc, &expected);
        }
    }
    Ok(CheckReport::new(vec![scaling.finish(), product.finish(), full_sum.finish(), pair_sum.finish()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn ints(l: &LatinSquare) -> Vec<Vec<u32>> {
        l.rows().iter().map(|r| r.iter().map(|e| e.0).collect()).collect()
    }

    #[test]
    fn gf5_squares() {
        let s = f(5);
        let l1 = latin_square(&s, FieldElement(1)).unwrap();
        assert_eq!(ints(&l1)[0], [0, 1, 2, 3, 4]);
        assert_eq!(ints(&l1)[1], [4, 0, 1, 2, 3]);
        let l2 = latin_square(&s, FieldElement(2)).unwrap();
        assert_eq!(ints(&l2)[0], [0, 2, 4, 1, 3]);
        assert_eq!(ints(&l2)[1], [3, 0, 2, 4, 1]);
        let l3 = latin_square(&s, FieldElement(3)).unwrap();
        assert_eq!(ints(&l3)[0], [0, 3, 1, 4, 2]);
        // the formula gives L_4 ≠ L_3
        let l4 = latin_square(&s, FieldElement(4)).unwrap();
        assert_eq!(ints(&l4)[0], [0, 4, 3, 2, 1]);
        assert_ne!(l3, l4);
        assert!(latin_square(&s, FieldElement::ZERO).is_err());
    }

    #[test]
    fn squares_are_latin_with_zero_diagonal() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let s = f(q);
            for b in s.nonzero() {
                let l = latin_square(&s, b).unwrap();
                assert!(LatinSquare::new(l.rows().to_vec()).is_ok());
                assert!((0..l.order()).all(|i| l.cell(i, i).is_zero()));
            }
        }
    }

    #[test]
    fn complete_set_is_mutually_suitable() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let s = f(q);
            let squares: Vec<_> = s.nonzero().map(|b| latin_square(&s, b).unwrap()).collect();
            for (i, a) in squares.iter().enumerate() {
                for (j, b) in squares.iter().enumerate() {
                    assert_eq!(is_suitable(a, b).unwrap(), i != j, "q = {q}, {i} vs {j}");
                }
            }
        }
    }

    #[test]
    fn order_one_is_suitable() {
        let one = LatinSquare::new(vec![vec![0u8]]).unwrap();
        assert!(is_suitable(&one, &one).unwrap());
    }

    #[test]
    fn transpose_negates_beta() {
        for q in [3, 4, 5, 7, 9] {
            let s = f(q);
            for b in s.nonzero() {
                assert_eq!(latin_square(&s, b).unwrap().transpose(), latin_square(&s, s.neg(b)).unwrap());
            }
        }
    }

    #[test]
    fn components() {
        let s = f(5);
        let l1 = latin_square(&s, FieldElement(1)).unwrap();
        let pc = perm_components(&s, FieldElement(1), &l1).unwrap();
        assert_eq!(pc.part(FieldElement(0)), [0, 1, 2, 3, 4]);
        assert_eq!(pc.part(FieldElement(2)), [2, 3, 4, 0, 1]);
        for q in [3, 4, 5, 8] {
            let s = f(q);
            for b in s.nonzero() {
                let pc = perm_components(&s, b, &latin_square(&s, b).unwrap()).unwrap();
                let mut sum = IntMatrix::zero(q as usize, q as usize);
                for g in s.elements() {
                    assert_eq!(pc.part(g), perm_component(&s, b, g).unwrap());
                    let m = pc.matrix(g);
                    assert!(m.hadamard_product(&sum).unwrap().is_zero());
                    sum = sum.add(&m).unwrap();
                }
                assert_eq!(sum, IntMatrix::all_ones(q as usize));
            }
        }
    }

    #[test]
    fn calculus_holds() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let rep = check_perm_calculus(&f(q)).unwrap();
            assert!(rep.all_passed(), "q = {q}: {rep:?}");
        }
    }

    #[test]
    fn relabelling() {
        let s = f(5);
        let l = latin_square(&s, FieldElement(2)).unwrap();
        let id: HashMap<_, _> = s.elements().map(|e| (e, e)).collect();
        assert_eq!(l.relabel(&id).unwrap(), l);
        let named: HashMap<_, _> =
            s.elements().map(|e| (e, if e.is_zero() { "x".to_string() } else { e.to_string() })).collect();
        let lx = l.relabel(&named).unwrap();
        assert!((0..5).all(|i| lx.cell(i, i) == "x"));
        let back: HashMap<_, _> = named.iter().map(|(k, v)| (v.clone(), *k)).collect();
        assert_eq!(lx.relabel(&back).unwrap(), l);
        let collapse: HashMap<_, _> = s.elements().map(|e| (e, 0)).collect();
        assert!(matches!(l.relabel(&collapse), Err(Error::NotBijective(_))));
    }

    #[test]
    fn csv_export() {
        let l = latin_square(&f(3), FieldElement(1)).unwrap();
        let mut buf = Vec::new();
        l.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0,1,2\n2,0,1\n1,2,0\n");
    }
}
