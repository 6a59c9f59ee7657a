//! Printed example tables, transcribed entry for entry.
#![allow(dead_code)]

use assoc_schemes::exact_arith::Cyclotomic;
use assoc_schemes::scheme::Eigenmatrix;

/// A printed table cell: an integer, or c·w^k + 1 with w a primitive
/// fifth root of unity.
#[derive(Clone, Copy)]
pub enum Cell {
    Int(i64),
    Pow { coeff: i64, k: i64 },
}

use Cell::{Int as I, Pow as W};

fn cell(c: Cell, order: u32) -> Cyclotomic {
    match c {
        Cell::Int(v) => Cyclotomic::from_int(order, v),
        Cell::Pow { coeff, k } => {
            // w = ζ_5 = ζ_order^(order/5)
            let w = Cyclotomic::zeta_pow(order, k * (order as i64 / 5));
            &(&w * &Cyclotomic::from_int(order, coeff)) + &Cyclotomic::one(order)
        }
    }
}

fn build(order: u32, rows: &[&str], mults: &[i64], cols: &[&str], cells: &[Vec<Cell>]) -> Eigenmatrix {
    Eigenmatrix::new(
        order,
        rows.iter().map(|s| s.to_string()).collect(),
        mults.to_vec(),
        cols.iter().map(|s| s.to_string()).collect(),
        cells.iter().map(|r| r.iter().map(|&c| cell(c, order)).collect()).collect(),
    )
    .expect("well-formed table")
}

fn w_block(coeff: i64) -> [[Cell; 4]; 4] {
    let w = |k| W { coeff, k };
    [[w(1), w(2), w(3), w(4)], [w(3), w(1), w(4), w(2)], [w(2), w(4), w(1), w(3)], [w(4), w(3), w(2), w(1)]]
}

/// The printed 7×7 first eigenmatrix of the twin scheme at q = 3, in
/// Q(ζ_15). Multiplicities are not printed with the table; they are taken
/// from the general theorem.
pub fn printed_twin_q3() -> Eigenmatrix {
    let mut cells = vec![
        vec![I(1), I(4), I(8), I(8), I(8), I(8), I(8)],
        vec![I(1), I(-1), I(8), I(-2), I(-2), I(-2), I(-2)],
        vec![I(1), I(4), I(-1), I(-1), I(-1), I(-1), I(-1)],
    ];
    for row in w_block(3) {
        let mut r = vec![I(1), I(-1), I(-1)];
        r.extend(row);
        cells.push(r);
    }
    build(
        15,
        &["V0", "V1", "V2", "V3,1", "V3,2", "V3,3", "V3,4"],
        &[1, 4, 8, 8, 8, 8, 8],
        &["R0", "R1", "R2", "R3,1", "R3,2", "R3,3", "R3,4"],
        &cells,
    )
}

/// The printed 9×9 first eigenmatrix of the GDD scheme at q = 4, in
/// Q(ζ_10), with the coefficient of w in the last block given as
/// `coeff` (printed: 3).
pub fn printed_gdd_q4_with(coeff: i64) -> Eigenmatrix {
    let mut cells = vec![
        vec![I(1), I(3), I(12), I(4), I(12), I(12), I(12), I(12), I(12)],
        vec![I(1), I(3), I(-4), I(4), I(12), I(-4), I(-4), I(-4), I(-4)],
        vec![I(1), I(-1), I(0), I(4), I(-3), I(0), I(0), I(0), I(0)],
        vec![I(1), I(3), I(12), I(-1), I(-4), I(-3), I(-3), I(-3), I(-3)],
        vec![I(1), I(-1), I(0), I(-1), I(1), I(1), I(1), I(1), I(1)],
    ];
    for row in w_block(coeff) {
        let mut r = vec![I(1), I(-1), I(0), I(-1), I(1)];
        r.extend(row);
        cells.push(r);
    }
    build(
        10,
        &["V0", "V1", "V2", "V3", "V4", "V5,1", "V5,2", "V5,3", "V5,4"],
        &[1, 3, 12, 4, 12, 12, 12, 12, 12],
        &["R0", "R1", "R2", "R3", "R4", "R5,1", "R5,2", "R5,3", "R5,4"],
        &cells,
    )
}

pub fn printed_gdd_q4() -> Eigenmatrix {
    printed_gdd_q4_with(3)
}

/// Nontrivial rows of `p` whose entries do not sum to zero. The classes sum
/// to J, so each row sum is the eigenvalue of J on that eigenspace, which is
/// zero for every eigenspace except the constants.
pub fn nonzero_row_sums(p: &Eigenmatrix) -> Vec<String> {
    (1..p.size())
        .filter(|&i| {
            let total = p.entries[i].iter().fold(Cyclotomic::zero(p.order), |acc, x| &acc + x);
            !total.is_zero()
        })
        .map(|i| p.row_labels[i].clone())
        .collect()
}
