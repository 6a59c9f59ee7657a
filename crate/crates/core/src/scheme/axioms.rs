//! Coordinatewise verification of the association-scheme axioms.
//!
//! When the classes partition J, every vertex pair (x, z) has a class
//! index L[x][z], and (A_i A_j)[x][z] is the number of y with L[x][y] = i
//! and L[y][z] = j. Counting these for every (x, z) checks closure and
//! commutativity at every coordinate without forming any product. If the
//! classes do not partition J the products are formed explicitly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SchemeInstance;
use crate::check::{matrix_witness, CheckReport, Clause, Witness};
use crate::error::Result;
use crate::int_linalg::{lin_comb, IntMatrix};

/// p[i][j][k]: the (x, z) entry of A_i A_j for any (x, z) in class k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTensor {
    pub labels: Vec<String>,
    pub p: Vec<Vec<Vec<u64>>>,
}

impl IntersectionTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.p[i][j][k]
    }

    /// p_{0j}^k = δ_{jk} and Σ_k p_{ij}^k k_k = k_i k_j.
    pub fn is_consistent(&self, valencies: &[i64]) -> bool {
        let c = self.labels.len();
        let unit = (0..c).all(|j| (0..c).all(|k| self.p[0][j][k] == (j == k) as u64));
        let counts = (0..c).all(|i| {
            (0..c).all(|j| {
                let lhs: i64 = (0..c).map(|k| self.p[i][j][k] as i64 * valencies[k]).sum();
                lhs == valencies[i] * valencies[j]
            })
        });
        unit && counts
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub clauses: CheckReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection: Option<IntersectionTensor>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.all_passed()
    }
}

pub fn is_symmetric_scheme(s: &SchemeInstance) -> bool {
    s.classes().iter().all(|c| c.matrix.is_symmetric())
}

/// Class index of every cell, or the first cell covered zero or several times.
fn class_index(s: &SchemeInstance) -> std::result::Result<Vec<u16>, Witness> {
    let v = s.vertex_count();
    let mut idx = vec![u16::MAX; v * v];
    let mut cover = vec![0u32; v * v];
    for (i, c) in s.classes().iter().enumerate() {
        for (k, &e) in c.matrix.data().iter().enumerate() {
            if e != 0 {
                idx[k] = i as u16;
                cover[k] += 1;
            }
        }
    }
    match cover.iter().position(|&n| n != 1) {
        None => Ok(idx),
        Some(k) => Err(Witness {
            context: "sum of all classes".into(),
            row: k / v,
            col: k % v,
            expected: 1,
            found: cover[k] as i64,
        }),
    }
}

fn check_as1(s: &SchemeInstance) -> Clause {
    let v = s.vertex_count();
    match s.classes().first() {
        None => Clause::fail("AS1", None, "no classes"),
        Some(c) => match matrix_witness(&c.label, &c.matrix, &IntMatrix::identity(v)) {
            None => Clause::pass("AS1"),
            Some(w) => Clause::fail("AS1", Some(w), "first class is not the identity"),
        },
    }
}

fn check_as3(s: &SchemeInstance) -> Clause {
    for (i, c) in s.classes().iter().enumerate().skip(1) {
        let t = c.matrix.transpose();
        // the class holding the transpose of the first entry is the only candidate
        let first = c.matrix.data().iter().position(|&e| e != 0);
        let candidate = first.and_then(|k| {
            let (x, y) = (k / s.vertex_count(), k % s.vertex_count());
            (1..s.len()).find(|&j| s.matrix(j).get(y, x) != 0)
        });
        let target = candidate.map(|j| s.matrix(j));
        let w = match target {
            Some(m) => matrix_witness(&format!("transpose of {}", c.label), &t, m),
            None => {
                Some(Witness { context: format!("transpose of {}", c.label), row: 0, col: 0, expected: 1, found: 0 })
            }
        };
        if let Some(w) = w {
            let note = format!("transpose of class {i} ({}) is not a class", c.label);
            return Clause::fail("AS3", Some(w), note);
        }
    }
    Clause::pass("AS3")
}

struct RowTally {
    /// Flattened [k][i][j] with -1 for combinations not seen in this row.
    values: Vec<i64>,
    violation: Option<Witness>,
}

/// Counts (L[x][y], L[y][z]) pairs for every z and checks they depend only
/// on L[x][z] within the row.
fn tally_row(x: usize, idx: &[u16], v: usize, c: usize, labels: &[String]) -> RowTally {
    let mut cnt = vec![0u32; v * c * c];
    let lx = &idx[x * v..(x + 1) * v];
    for (y, &i) in lx.iter().enumerate() {
        let base = i as usize * c;
        for (z, &j) in idx[y * v..(y + 1) * v].iter().enumerate() {
            cnt[z * c * c + base + j as usize] += 1;
        }
    }
    let mut values = vec![-1i64; c * c * c];
    let mut violation = None;
    for (z, &k) in lx.iter().enumerate() {
        let k = k as usize;
        let here = &cnt[z * c * c..(z + 1) * c * c];
        let reference = &mut values[k * c * c..(k + 1) * c * c];
        for (ij, (&n, r)) in here.iter().zip(reference.iter_mut()).enumerate() {
            if *r < 0 {
                *r = n as i64;
            } else if *r != n as i64 && violation.is_none() {
                violation = Some(Witness {
                    context: format!("A_{} A_{} on class {}", labels[ij / c], labels[ij % c], labels[k]),
                    row: x,
                    col: z,
                    expected: *r,
                    found: n as i64,
                });
            }
        }
    }
    RowTally { values, violation }
}

fn closure_from_partition(s: &SchemeInstance, idx: &[u16]) -> (Clause, Clause, Option<IntersectionTensor>) {
    let v = s.vertex_count();
    let c = s.len();
    let labels = s.labels();
    let tallies: Vec<RowTally> = (0..v).into_par_iter().map(|x| tally_row(x, idx, v, c, &labels)).collect();

    let mut tensor = vec![-1i64; c * c * c];
    let mut rep = vec![None; c];
    let mut as4 = None;
    for (x, t) in tallies.iter().enumerate() {
        if as4.is_none() {
            as4 = t.violation.clone();
        }
        for k in 0..c {
            for ij in 0..c * c {
                let val = t.values[k * c * c + ij];
                if val < 0 {
                    continue;
                }
                let slot = &mut tensor[k * c * c + ij];
                if *slot < 0 {
                    *slot = val;
                    if rep[k].is_none() {
                        let z = idx[x * v..(x + 1) * v].iter().position(|&l| l as usize == k).unwrap_or(0);
                        rep[k] = Some((x, z));
                    }
                } else if *slot != val && as4.is_none() {
                    let z = idx[x * v..(x + 1) * v].iter().position(|&l| l as usize == k).unwrap_or(0);
                    as4 = Some(Witness {
                        context: format!("A_{} A_{} on class {}", labels[ij / c], labels[ij % c], labels[k]),
                        row: x,
                        col: z,
                        expected: *slot,
                        found: val,
                    });
                }
            }
        }
    }
    let as4_clause = match as4 {
        None => Clause::pass("AS4"),
        Some(w) => Clause::fail("AS4", Some(w), "a product is not constant on a class"),
    };

    let mut as5 = None;
    'outer: for k in 0..c {
        for i in 0..c {
            for j in (i + 1)..c {
                let a = tensor[k * c * c + i * c + j];
                let b = tensor[k * c * c + j * c + i];
                if a != b {
                    let (row, col) = rep[k].unwrap_or((0, 0));
                    as5 = Some(Witness {
                        context: format!("A_{} A_{} vs A_{} A_{}", labels[i], labels[j], labels[j], labels[i]),
                        row,
                        col,
                        expected: b,
                        found: a,
                    });
                    break 'outer;
                }
            }
        }
    }
    let as5_clause = match as5 {
        None => Clause::pass("AS5"),
        Some(w) => Clause::fail("AS5", Some(w), "two classes do not commute"),
    };

    let tensor = as4_clause.passed.then(|| IntersectionTensor {
        labels: labels.clone(),
        p: (0..c)
            .map(|i| (0..c).map(|j| (0..c).map(|k| tensor[k * c * c + i * c + j].max(0) as u64).collect()).collect())
            .collect(),
    });
    (as4_clause, as5_clause, tensor)
}

/// Closure and commutativity by explicit products, for class lists that do
/// not partition J.
fn closure_from_products(s: &SchemeInstance) -> Result<(Clause, Clause)> {
    let c = s.len();
    let labels = s.labels();
    let union = lin_comb(&s.classes().iter().map(|cl| (1, &cl.matrix)).collect::<Vec<_>>())?;
    let mut as4 = None;
    let mut as5 = None;
    let mut products = vec![None; c * c];
    for i in 0..c {
        for j in 0..c {
            products[i * c + j] = Some(s.matrix(i).mat_mul(s.matrix(j))?);
        }
    }
    let prod = |i: usize, j: usize| products[i * c + j].as_ref().expect("computed");
    'pairs: for i in 0..c {
        for j in 0..c {
            let m = prod(i, j);
            for k in 0..c {
                let mut value = None;
                for (pos, &e) in s.matrix(k).data().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let found = m.data()[pos];
                    match value {
                        None => value = Some(found),
                        Some(v0) if v0 != found => {
                            as4 = Some(Witness {
                                context: format!("A_{} A_{} on class {}", labels[i], labels[j], labels[k]),
                                row: pos / m.cols(),
                                col: pos % m.cols(),
                                expected: v0,
                                found,
                            });
                            break 'pairs;
                        }
                        _ => {}
                    }
                }
            }
            if let Some(pos) = union.data().iter().zip(m.data()).position(|(&u, &e)| u == 0 && e != 0) {
                as4 = Some(Witness {
                    context: format!("A_{} A_{} outside every class", labels[i], labels[j]),
                    row: pos / m.cols(),
                    col: pos % m.cols(),
                    expected: 0,
                    found: m.data()[pos],
                });
                break 'pairs;
            }
        }
    }
    'comm: for i in 0..c {
        for j in (i + 1)..c {
            let ctx = format!("A_{} A_{} vs A_{} A_{}", labels[i], labels[j], labels[j], labels[i]);
            if let Some(w) = matrix_witness(&ctx, prod(i, j), prod(j, i)) {
                as5 = Some(w);
                break 'comm;
            }
        }
    }
    let as4 = match as4 {
        None => Clause::pass("AS4"),
        Some(w) => Clause::fail("AS4", Some(w), "a product is not a combination of classes"),
    };
    let as5 = match as5 {
        None => Clause::pass("AS5"),
        Some(w) => Clause::fail("AS5", Some(w), "two classes do not commute"),
    };
    Ok((as4, as5))
}

/// Checks AS1–AS5 and, when closure holds on a partition, returns the
/// intersection numbers.
pub fn verify_axioms(s: &SchemeInstance) -> Result<AxiomReport> {
    let as1 = check_as1(s);
    let partition = class_index(s);
    let as2 = match &partition {
        Ok(_) => Clause::pass("AS2"),
        Err(w) => Clause::fail("AS2", Some(w.clone()), "classes do not sum to J"),
    };
    let as3 = check_as3(s);
    let (as4, as5, intersection) = match &partition {
        Ok(idx) => closure_from_partition(s, idx),
        Err(_) => {
            let (a, b) = closure_from_products(s)?;
            (a, b, None)
        }
    };
    Ok(AxiomReport { clauses: CheckReport::new(vec![as1, as2, as3, as4, as5]), intersection })
}
