//! Incidence matrices N_β assembled from auxiliary matrices C_a and the
//! field-derived Latin squares, shared by the twin and GDD families.
//!
//! With φ a bijection from 𝔽_r onto a set of auxiliary labels, N_β is the
//! r×r grid of blocks C_{φ(L_β(β′, β″))}, equivalently Σ_γ P_{β,γ} ⊗ C_{φ(γ)}.

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::gh_aux::{AuxFamily, AuxLabel};
use crate::int_linalg::IntMatrix;
use crate::latin::{latin_square, perm_components};

/// A bijection φ: 𝔽_r → 𝔽_q ∪ {x} (∪ {y}) with φ(0) = x.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bijection {
    /// φ of each element of 𝔽_r, by canonical index.
    images: Vec<AuxLabel>,
}

impl Bijection {
    /// Validates `images` against 𝔽_q ∪ {x}, plus {y} when `with_y`.
    pub fn new(images: Vec<AuxLabel>, r: usize, q: usize, with_y: bool) -> Result<Self> {
        let expected = q + 1 + with_y as usize;
        if r != expected || images.len() != r {
            return Err(Error::NotBijective(format!(
                "φ needs {expected} images for a field of order {r}, got {}",
                images.len()
            )));
        }
        if images.first() != Some(&AuxLabel::X) {
            return Err(Error::InvalidParameter("φ(0) must be x".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &l in &images {
            let valid = match l {
                AuxLabel::Field(a) => a.index() < q,
                AuxLabel::X => true,
                AuxLabel::Y => with_y,
            };
            if !valid {
                return Err(Error::NotBijective(format!("{l} is not an allowed image")));
            }
            if !seen.insert(l) {
                return Err(Error::NotBijective(format!("{l} is hit twice")));
            }
        }
        Ok(Self { images })
    }

    /// 0 ↦ x, then y (when `with_y`), then 𝔽_q in canonical order, each
    /// assigned to the next nonzero element of 𝔽_r in canonical order.
    pub fn canonical(r: usize, q: usize, with_y: bool) -> Result<Self> {
        let mut images = vec![AuxLabel::X];
        if with_y {
            images.push(AuxLabel::Y);
        }
        images.extend((0..q as u32).map(|i| AuxLabel::Field(FieldElement(i))));
        Self::new(images, r, q, with_y)
    }

    /// Reads a two-column CSV of `element,label` rows, element by
    /// canonical index and label as `x`, `y` or a canonical index. A
    /// header row and `#` comments are allowed.
    pub fn from_csv<R: Read>(reader: R, r: usize, q: usize, with_y: bool) -> Result<Self> {
        let mut rdr =
            csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
        let mut map: HashMap<usize, AuxLabel> = HashMap::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!("row {}: expected two columns", line + 1)));
            }
            let Ok(e) = rec[0].parse::<usize>() else {
                if line == 0 {
                    continue;
                }
                return Err(Error::Parse(format!("row {}: bad element {:?}", line + 1, &rec[0])));
            };
            let l: AuxLabel = rec[1].parse()?;
            if map.insert(e, l).is_some() {
                return Err(Error::NotBijective(format!("element {e} mapped twice")));
            }
        }
        let images = (0..r)
            .map(|e| map.remove(&e).ok_or_else(|| Error::NotBijective(format!("element {e} has no image"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(e) = map.keys().next() {
            return Err(Error::NotBijective(format!("element {e} is outside the field")));
        }
        Self::new(images, r, q, with_y)
    }

    pub fn image(&self, b: FieldElement) -> AuxLabel {
        self.images[b.index()]
    }

    pub fn images(&self) -> &[AuxLabel] {
        &self.images
    }

    pub fn preimage(&self, l: AuxLabel) -> Option<FieldElement> {
        self.images.iter().position(|&m| m == l).map(|i| FieldElement(i as u32))
    }

    /// `element,label` rows in canonical order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("element,label\n");
        for (i, l) in self.images.iter().enumerate() {
            s.push_str(&format!("{i},{l}\n"));
        }
        s
    }
}

/// Σ_γ P_{β,γ} ⊗ C_{φ(γ)}.
pub fn incidence_kronecker(
    spec_r: &FieldSpec,
    aux: &AuxFamily,
    phi: &Bijection,
    beta: FieldElement,
) -> Result<IntMatrix> {
    let parts = perm_components(spec_r, beta, &latin_square(spec_r, beta)?)?;
    let n = spec_r.order() as usize * aux.spec().order().pow(2) as usize;
    spec_r
        .elements()
        .try_fold(IntMatrix::zero(n, n), |acc, g| acc.add(&parts.matrix(g).kronecker(aux.get(phi.image(g)))?))
}

/// The block grid (C_{φ(L_β(β′, β″))})_{β′,β″}.
pub fn incidence_blocks(spec_r: &FieldSpec, aux: &AuxFamily, phi: &Bijection, beta: FieldElement) -> Result<IntMatrix> {
    let l = latin_square(spec_r, beta)?;
    let map: HashMap<FieldElement, AuxLabel> = spec_r.elements().map(|g| (g, phi.image(g))).collect();
    let relabeled = l.relabel(&map)?;
    let grid: Vec<Vec<IntMatrix>> =
        relabeled.rows().iter().map(|row| row.iter().map(|&lab| aux.get(lab).clone()).collect()).collect();
    IntMatrix::block_assemble(&grid)
}

/// N_β by the Kronecker form, cross-checked against the block form.
pub fn incidence(spec_r: &FieldSpec, aux: &AuxFamily, phi: &Bijection, beta: FieldElement) -> Result<IntMatrix> {
    let k = incidence_kronecker(spec_r, aux, phi, beta)?;
    let b = incidence_blocks(spec_r, aux, phi, beta)?;
    if let Some((i, j)) = k.first_difference(&b) {
        return Err(Error::ConstructionMismatch(format!("N_{beta}: Kronecker and block forms differ at ({i}, {j})")));
    }
    Ok(k)
}

/// Encoded elements (b, a1, a2) ∈ 𝔽_r × 𝔽_q × 𝔽_q in row 0 of N_β:
/// {(b, a, φ(βb)a) : φ(βb) ∈ 𝔽_q} ∪ {(b, 0, a) : φ(βb) = y}.
pub fn incidence_support(
    spec_r: &FieldSpec,
    spec_q: &FieldSpec,
    phi: &Bijection,
    beta: FieldElement,
) -> Vec<(FieldElement, FieldElement, FieldElement)> {
    let mut out = Vec::new();
    for b in spec_r.elements() {
        match phi.image(spec_r.mul(beta, b)) {
            AuxLabel::Field(c) => out.extend(spec_q.elements().map(|a| (b, a, spec_q.mul(c, a)))),
            AuxLabel::Y => out.extend(spec_q.elements().map(|a| (b, FieldElement::ZERO, a))),
            AuxLabel::X => {}
        }
    }
    out
}

pub(crate) fn kron(parts: &[&IntMatrix]) -> Result<IntMatrix> {
    parts.iter().try_fold(IntMatrix::identity(1), |acc, m| acc.kronecker(m))
}

/// Visits every unordered pair {β, β′} of nonzero elements (β = β′
/// included) with both products N_βN_β′ and N_β′N_β. `ns[i]` is N_β for
/// the element of canonical index i + 1.
pub(crate) fn for_each_pair(
    spec_r: &FieldSpec,
    ns: &[IntMatrix],
    mut f: impl FnMut(FieldElement, FieldElement, &IntMatrix, &IntMatrix) -> Result<()>,
) -> Result<()> {
    let nonzero: Vec<FieldElement> = spec_r.nonzero().collect();
    for (i, &b) in nonzero.iter().enumerate() {
        for &b2 in &nonzero[i..] {
            let (x, y) = (&ns[b.index() - 1], &ns[b2.index() - 1]);
            let xy = x.mat_mul(y)?;
            let yx = if b == b2 { xy.clone() } else { y.mat_mul(x)? };
            f(b, b2, &xy, &yx)?;
        }
    }
    Ok(())
}

/// `R{i}`, or `R{i},{β}` for a relation indexed by a field element.
pub fn relation_label(b: Option<FieldElement>, i: usize) -> String {
    match b {
        Some(b) => format!("R{i},{b}"),
        None => format!("R{i}"),
    }
}

/// `V{i}`, or `V{i},{β̃}` for an eigenspace indexed by a field element.
pub fn eigenspace_label(b: Option<FieldElement>, i: usize) -> String {
    match b {
        Some(b) => format!("V{i},{b}"),
        None => format!("V{i}"),
    }
}

/// Number of characters in each eigenspace, keyed by label.
pub(crate) fn count_characters(
    factors: &[FieldSpec],
    label: impl Fn(&[FieldElement]) -> Result<String>,
) -> Result<HashMap<String, i64>> {
    let mut counts = HashMap::new();
    let sizes: Vec<u32> = factors.iter().map(FieldSpec::order).collect();
    let total: u32 = sizes.iter().product();
    for x in 0..total {
        let mut rest = x;
        let mut c = vec![FieldElement::ZERO; sizes.len()];
        for (slot, &s) in c.iter_mut().zip(&sizes).rev() {
            *slot = FieldElement(rest % s);
            rest /= s;
        }
        *counts.entry(label(&c)?).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Label map under which a table written with χ(β/β̃) in place of
/// χ(β̃/β) agrees with ours: V_{3,t} ↦ V_{3,1/t} and R_{3,s} ↦ R_{3,1/s}.
pub fn reciprocal_label_map(
    spec_r: &FieldSpec,
    index: usize,
) -> Result<(HashMap<String, String>, HashMap<String, String>)> {
    let mut rows = HashMap::new();
    let mut cols = HashMap::new();
    for t in spec_r.nonzero() {
        let inv = spec_r.inv(t)?;
        rows.insert(eigenspace_label(Some(t), index), eigenspace_label(Some(inv), index));
        cols.insert(relation_label(Some(t), index), relation_label(Some(inv), index));
    }
    Ok((rows, cols))
}

/// J_n − I_n.
pub(crate) fn off_diagonal(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| (i != j) as i64)
}
