//! Self-duality: P equals the conjugate of Q after matching relations with
//! eigenspaces.

use serde::{Deserialize, Serialize};

use super::{CharacterEigen, Eigenmatrix, TranslationData};

/// A witness that P = conj(Q) after reindexing.
///
/// `tau[r]` is the eigenspace (row of P) paired with relation r (column
/// of P). The identity reads P[τ(r)][r'] = conj(Q[r][τ(r')]) for all r, r'.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDuality {
    pub tau: Vec<usize>,
    /// Row permutation taking P's rows onto Q's rows: P row τ(r) ↦ Q row r.
    pub row_permutation: Vec<usize>,
    /// Column permutation taking P's columns onto Q's columns: r ↦ τ(r).
    pub column_permutation: Vec<usize>,
}

impl SelfDuality {
    fn from_tau(tau: Vec<usize>) -> Self {
        let mut rows = vec![0; tau.len()];
        for (r, &e) in tau.iter().enumerate() {
            rows[e] = r;
        }
        Self { column_permutation: tau.clone(), row_permutation: rows, tau }
    }
}

/// Checks the full identity P[τ(r)][r'] = conj(Q[r][τ(r')]).
pub fn verify_pairing(p: &Eigenmatrix, q: &Eigenmatrix, tau: &[usize]) -> bool {
    let d = p.size();
    if q.size() != d || tau.len() != d {
        return false;
    }
    let mut seen = vec![false; d];
    for &e in tau {
        if e >= d || std::mem::replace(&mut seen[e], true) {
            return false;
        }
    }
    (0..d).all(|r| (0..d).all(|s| *p.entry(tau[r], s) == q.entry(r, tau[s]).conj()))
}

/// Backtracking search for a self-duality pairing.
///
/// τ(0) = 0 is forced (only the trivial eigenspace has an all-ones column
/// in Q), hence k_r = m_{τ(r)} for every r; candidates are restricted to
/// eigenspaces with matching multiplicity and each assignment is checked
/// against all earlier ones.
pub fn check_self_dual(p: &Eigenmatrix, q: &Eigenmatrix) -> Option<SelfDuality> {
    let d = p.size();
    if q.size() != d || d == 0 {
        return None;
    }
    let conj_q: Vec<Vec<_>> = q.entries.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect();
    let valency = |r: usize| p.entry(0, r).as_integer();
    let candidates: Vec<Vec<usize>> = (0..d)
        .map(|r| if r == 0 { vec![0] } else { (1..d).filter(|&e| valency(r) == Some(p.multiplicities[e])).collect() })
        .collect();

    fn extend(
        r: usize,
        tau: &mut Vec<usize>,
        used: &mut [bool],
        candidates: &[Vec<usize>],
        ok: &dyn Fn(usize, usize, usize, usize) -> bool,
    ) -> bool {
        if r == candidates.len() {
            return true;
        }
        for &e in &candidates[r] {
            if used[e] {
                continue;
            }
            // new pairs: (r, s) and (s, r) for every assigned s, and (r, r)
            let consistent = ok(r, e, r, e) && (0..r).all(|s| ok(r, e, s, tau[s]) && ok(s, tau[s], r, e));
            if !consistent {
                continue;
            }
            used[e] = true;
            tau.push(e);
            if extend(r + 1, tau, used, candidates, ok) {
                return true;
            }
            tau.pop();
            used[e] = false;
        }
        false
    }

    // ok(r, τr, s, τs): P[τr][s] == conj(Q[r][τs])
    let ok = |r: usize, tr: usize, s: usize, ts: usize| p.entries[tr][s] == conj_q[r][ts];
    let mut tau = Vec::with_capacity(d);
    let mut used = vec![false; d];
    if extend(0, &mut tau, &mut used, &candidates, &ok) {
        debug_assert!(verify_pairing(p, q, &tau));
        Some(SelfDuality::from_tau(tau))
    } else {
        None
    }
}

/// Tests the identification of each group element a with the character
/// χ_a: for every relation N_i, returns the eigenspace whose spanning
/// characters are exactly {χ_a : a ∈ N_i}, or `None` when no eigenspace
/// matches.
pub fn check_translation_duality(t: &TranslationData, ce: &CharacterEigen) -> Vec<Option<usize>> {
    t.relations().iter().map(|rel| ce.row_characters.iter().position(|chars| *chars == rel.elements)).collect()
}
