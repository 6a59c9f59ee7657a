//! Symmetric designs and symmetric group divisible designs, checked by
//! their defining product equations.

use crate::check::{matrix_witness, Clause};
use crate::error::Result;
use crate::int_linalg::{lin_comb, IntMatrix};

fn square_01(n: &IntMatrix, v: usize) -> bool {
    n.shape() == (v, v) && n.is_zero_one()
}

/// NNᵀ and NᵀN must both equal `expected`.
fn gram_clause(name: &str, n: &IntMatrix, expected: &IntMatrix) -> Result<Clause> {
    let nt = n.transpose();
    for (ctx, prod) in [("N Nᵀ", n.mat_mul(&nt)?), ("Nᵀ N", nt.mat_mul(n)?)] {
        if let Some(w) = matrix_witness(ctx, &prod, expected) {
            return Ok(Clause::fail(name, Some(w), format!("{ctx} differs from the design equation")));
        }
    }
    Ok(Clause::pass(name))
}

/// NNᵀ = NᵀN = kI + λ(J − I).
pub fn symmetric_design_clause(name: &str, n: &IntMatrix, v: usize, k: i64, lambda: i64) -> Result<Clause> {
    if !square_01(n, v) {
        return Ok(Clause::fail(name, None, format!("not a {v}×{v} 0/1 matrix")));
    }
    let i = IntMatrix::identity(v);
    let j = IntMatrix::all_ones(v);
    let expected = lin_comb(&[(k - lambda, &i), (lambda, &j)])?;
    gram_clause(name, n, &expected)
}

pub fn verify_symmetric_design(n: &IntMatrix, v: usize, k: i64, lambda: i64) -> Result<bool> {
    Ok(symmetric_design_clause("symmetric design", n, v, k, lambda)?.passed)
}

/// NNᵀ = NᵀN = kI + λ1(I_m⊗J_n − I) + λ2(J − I_m⊗J_n), the point classes
/// being the m consecutive blocks of n vertices.
#[allow(clippy::too_many_arguments)]
pub fn sgdd_clause(
    name: &str,
    n: &IntMatrix,
    v: usize,
    k: i64,
    m: usize,
    block: usize,
    lambda1: i64,
    lambda2: i64,
) -> Result<Clause> {
    if m * block != v || !square_01(n, v) {
        return Ok(Clause::fail(name, None, format!("not a {v}×{v} 0/1 matrix with {m} classes of {block}")));
    }
    let i = IntMatrix::identity(v);
    let j = IntMatrix::all_ones(v);
    let within = IntMatrix::identity(m).kronecker(&IntMatrix::all_ones(block))?;
    // kI + λ1(W − I) + λ2(J − W)
    let expected = lin_comb(&[(k - lambda1, &i), (lambda1 - lambda2, &within), (lambda2, &j)])?;
    gram_clause(name, n, &expected)
}

pub fn verify_sgdd(
    n: &IntMatrix,
    v: usize,
    k: i64,
    m: usize,
    block: usize,
    lambda1: i64,
    lambda2: i64,
) -> Result<bool> {
    Ok(sgdd_clause("group divisible design", n, v, k, m, block, lambda1, lambda2)?.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_designs() {
        for v in [1, 3, 7] {
            assert!(verify_symmetric_design(&IntMatrix::identity(v), v, 1, 0).unwrap());
            assert!(verify_symmetric_design(&IntMatrix::all_ones(v), v, v as i64, v as i64).unwrap());
        }
        assert!(!verify_symmetric_design(&IntMatrix::identity(3), 3, 2, 0).unwrap());
    }

    #[test]
    fn fano_plane() {
        // lines {i, i+1, i+3} mod 7
        let n = IntMatrix::from_fn(7, 7, |r, c| [0, 1, 3].contains(&((c + 7 - r) % 7)) as i64);
        assert!(verify_symmetric_design(&n, 7, 3, 1).unwrap());
        let bad = n.with_entry(0, 6, 1);
        let c = symmetric_design_clause("fano", &bad, 7, 3, 1).unwrap();
        assert!(!c.passed && c.witness.is_some());
    }

    #[test]
    fn sgdd_examples() {
        // I_m ⊗ J_n with (v, n, m, n, n, 0)
        let (m, b) = (3, 4);
        let n = IntMatrix::identity(m).kronecker(&IntMatrix::all_ones(b)).unwrap();
        assert!(verify_sgdd(&n, m * b, b as i64, m, b, b as i64, 0).unwrap());
        // improper case coincides with a symmetric design
        let f = IntMatrix::from_fn(7, 7, |r, c| [0, 1, 3].contains(&((c + 7 - r) % 7)) as i64);
        assert!(verify_sgdd(&f, 7, 3, 7, 1, 1, 1).unwrap());
        assert!(!verify_sgdd(&n, 11, 4, 3, 4, 4, 0).unwrap());
    }
}
