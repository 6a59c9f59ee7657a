//! Dense exact integer matrices.
//!
//! Entries are `i64`. Every arithmetic path is overflow-checked: products
//! take a fast path only when an a-priori bound proves the result fits,
//! and otherwise fall back to checked arithmetic that reports
//! [`Error::Overflow`].

use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for r in 0..self.rows {
                writeln!(f, "  {:?}", self.row(r))?;
            }
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch { op: "from_vec", left: (rows, cols), right: (data.len(), 1) });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch { op: "from_rows", left: (rows.len(), cols), right: (1, bad.len()) });
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| (i == j) as i64)
    }

    pub fn all_ones(n: usize) -> Self {
        Self { rows: n, cols: n, data: vec![1; n * n] }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    /// `P[i, perm[i]] = 1`; `perm` must be a bijection on 0..n.
    pub fn permutation_matrix(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotBijective(format!("{perm:?}")));
            }
        }
        let mut m = Self::zero(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m.data[i * n + p] = 1;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    /// Copy with a single entry replaced.
    pub fn with_entry(&self, r: usize, c: usize, v: i64) -> Self {
        let mut out = self.clone();
        out.data[r * self.cols + c] = v;
        out
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch { op, left: self.shape(), right: other.shape() });
        }
        Ok(())
    }

    fn max_abs(&self) -> u128 {
        self.data.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Exact product. Rows are computed in parallel; zero entries of the
    /// left factor are skipped, so 0/1 incidence products stay cheap.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch { op: "mat_mul", left: self.shape(), right: other.shape() });
        }
        let (n, m) = (self.rows, other.cols);
        let bound = self.max_abs() * other.max_abs() * self.cols as u128;
        let mut data = vec![0i64; n * m];
        if bound <= i64::MAX as u128 {
            data.par_chunks_mut(m.max(1)).enumerate().for_each(|(i, out)| {
                for (k, &a) in self.row(i).iter().enumerate() {
                    match a {
                        0 => {}
                        1 => out.iter_mut().zip(other.row(k)).for_each(|(o, &b)| *o += b),
                        _ => out.iter_mut().zip(other.row(k)).for_each(|(o, &b)| *o += a * b),
                    }
                }
            });
        } else {
            data.par_chunks_mut(m.max(1)).enumerate().try_for_each(|(i, out)| {
                for (k, &a) in self.row(i).iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(other.row(k)) {
                        let t = a.checked_mul(b).ok_or(Error::Overflow("mat_mul"))?;
                        *o = o.checked_add(t).ok_or(Error::Overflow("mat_mul"))?;
                    }
                }
                Ok::<_, Error>(())
            })?;
        }
        Ok(Self { rows: n, cols: m, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb_with(1, other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb_with(1, other, -1)
    }

    fn lin_comb_with(&self, s: i64, other: &Self, t: i64) -> Result<Self> {
        lin_comb(&[(s, self), (t, other)])
    }

    pub fn scale(&self, s: i64) -> Result<Self> {
        lin_comb(&[(s, self)])
    }

    /// Entrywise product.
    pub fn hadamard_product(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "hadamard_product")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_mul(*b).ok_or(Error::Overflow("hadamard_product")))
            .collect::<Result<_>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn is_zero_one(&self) -> bool {
        self.data.iter().all(|&x| x == 0 || x == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mat_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// First coordinate where the matrices differ (shape mismatch reports (0, 0)).
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((0, 0));
        }
        self.data.iter().zip(&other.data).position(|(a, b)| a != b).map(|k| (k / self.cols, k % self.cols))
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    /// Kronecker product: block (i, j) is `self[i, j] · other`.
    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let cols = c1 * c2;
        let mut data = vec![0i64; r1 * r2 * cols];
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..r2 {
                    let base = (i * r2 + k) * cols + j * c2;
                    for (l, &b) in other.row(k).iter().enumerate() {
                        data[base + l] = a.checked_mul(b).ok_or(Error::Overflow("kronecker"))?;
                    }
                }
            }
        }
        Ok(Self { rows: r1 * r2, cols, data })
    }

    /// Assembles a grid of blocks. Blocks in a grid row share a height and
    /// blocks in a grid column share a width.
    pub fn block_assemble(grid: &[Vec<IntMatrix>]) -> Result<Self> {
        let Some(first_row) = grid.first() else {
            return Ok(Self::zero(0, 0));
        };
        let widths: Vec<usize> = first_row.iter().map(|b| b.cols).collect();
        let heights: Vec<usize> = grid.iter().map(|r| r.first().map_or(0, |b| b.rows)).collect();
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::RaggedBlocks(format!(
                    "grid row {bi} has {} blocks, expected {}",
                    row.len(),
                    widths.len()
                )));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::RaggedBlocks(format!(
                        "block ({bi}, {bj}) is {}x{}, expected {}x{}",
                        b.rows, b.cols, heights[bi], widths[bj]
                    )));
                }
            }
        }
        let cols: usize = widths.iter().sum();
        let rows: usize = heights.iter().sum();
        let mut data = Vec::with_capacity(rows * cols);
        for (bi, row) in grid.iter().enumerate() {
            for r in 0..heights[bi] {
                for b in row {
                    data.extend_from_slice(b.row(r));
                }
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Text form: `"rows cols"` on the first line, then one line per row.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(i64::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }

    /// Parses the text form; any whitespace layout after the header is accepted.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut tokens = Vec::new();
        for line in r.lines() {
            let line = line?;
            for t in line.split_whitespace() {
                tokens.push(t.parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))?);
            }
        }
        if tokens.len() < 2 || tokens[0] < 0 || tokens[1] < 0 {
            return Err(Error::Parse("missing matrix header".into()));
        }
        let (rows, cols) = (tokens[0] as usize, tokens[1] as usize);
        Self::from_vec(rows, cols, tokens[2..].to_vec())
    }
}

/// Σ s_i · M_i over matrices of one shape.
pub fn lin_comb(terms: &[(i64, &IntMatrix)]) -> Result<IntMatrix> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::InvalidParameter("empty linear combination".into()));
    };
    let mut data = vec![0i64; first.data.len()];
    for &(s, m) in terms {
        first.same_shape(m, "lin_comb")?;
        if s == 0 {
            continue;
        }
        for (o, &x) in data.iter_mut().zip(&m.data) {
            let t = s.checked_mul(x).ok_or(Error::Overflow("lin_comb"))?;
            *o = o.checked_add(t).ok_or(Error::Overflow("lin_comb"))?;
        }
    }
    Ok(IntMatrix { rows: first.rows, cols: first.cols, data })
}
