//! Symmetric group divisible designs and a (q+4)-class translation scheme
//! from prime powers q and q+1.
//!
//! Vertices are 𝔽_{q+1} × 𝔽_q × 𝔽_q, encoded as β·q² + α1·q + α2.

use crate::check::{CheckReport, ClauseBuilder};
use crate::error::{Error, Result};
use crate::exact_arith::Cyclotomic;
use crate::finite_field::{FieldElement, FieldSpec};
use crate::gh_aux::{AuxFamily, AuxLabel};
use crate::incidence::{
    self, count_characters, eigenspace_label, for_each_pair, kron, off_diagonal, relation_label, Bijection,
};
use crate::int_linalg::{lin_comb, IntMatrix};
use crate::scheme::{
    encode, ensure_matches_relations, sgdd_clause, symmetric_design_clause, Eigenmatrix, Relation, SchemeInstance,
    TranslationData,
};

/// Fields 𝔽_q and 𝔽_{q+1}, the auxiliary matrices over 𝔽_q and the
/// bijection φ: 𝔽_{q+1} → 𝔽_q ∪ {x}.
#[derive(Clone, Debug)]
pub struct GddContext {
    spec_q: FieldSpec,
    spec_r: FieldSpec,
    phi: Bijection,
    aux: AuxFamily,
}

/// Builds the context for the pair (q, q+1). Without an explicit φ the
/// default sends 0 ↦ x and the nonzero elements of 𝔽_{q+1}, in canonical
/// order, to 𝔽_q in canonical order.
pub fn make_gdd_context(q: u64, phi: Option<Bijection>) -> Result<GddContext> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} must be at least 2")));
    }
    let spec_q = FieldSpec::of_order(q)?;
    let spec_r = FieldSpec::of_order(q + 1)?;
    let (r, qq) = (spec_r.order() as usize, q as usize);
    let phi = match phi {
        Some(p) => Bijection::new(p.images().to_vec(), r, qq, false)?,
        None => Bijection::canonical(r, qq, false)?,
    };
    let aux = AuxFamily::new(&spec_q)?;
    Ok(GddContext { spec_q, spec_r, phi, aux })
}

impl GddContext {
    pub fn q(&self) -> usize {
        self.spec_q.order() as usize
    }

    pub fn r(&self) -> usize {
        self.spec_r.order() as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.r() * self.q() * self.q()
    }

    pub fn spec_q(&self) -> &FieldSpec {
        &self.spec_q
    }

    pub fn spec_r(&self) -> &FieldSpec {
        &self.spec_r
    }

    pub fn phi(&self) -> &Bijection {
        &self.phi
    }

    pub fn aux(&self) -> &AuxFamily {
        &self.aux
    }

    /// N_β, built as Σ_γ P_{β,γ} ⊗ C_{φ(γ)} and checked against the block form.
    pub fn incidence_n(&self, beta: FieldElement) -> Result<IntMatrix> {
        if beta.is_zero() {
            return Err(Error::InvalidParameter("N_β needs β ≠ 0".into()));
        }
        incidence::incidence(&self.spec_r, &self.aux, &self.phi, beta)
    }

    /// N_β for every nonzero β in canonical order.
    pub fn incidences(&self) -> Result<Vec<IntMatrix>> {
        self.spec_r.nonzero().map(|b| self.incidence_n(b)).collect()
    }

    fn a3(&self) -> Result<IntMatrix> {
        off_diagonal(self.r()).kronecker(&IntMatrix::identity(self.q() * self.q()))
    }

    /// I_{q+1} ⊗ J_{q²}.
    fn block_ones(&self) -> Result<IntMatrix> {
        IntMatrix::identity(self.r()).kronecker(&IntMatrix::all_ones(self.q() * self.q()))
    }

    /// I_{(q+1)q} ⊗ J_q.
    fn row_ones(&self) -> Result<IntMatrix> {
        IntMatrix::identity(self.r() * self.q()).kronecker(&IntMatrix::all_ones(self.q()))
    }
}

fn n_of(ns: &[IntMatrix], b: FieldElement) -> &IntMatrix {
    &ns[b.index() - 1]
}

/// Checks the identities of the incidence matrices for every β, β′:
///
/// - N_βᵀ = N_{−β};
/// - N_βN_{−β} = q²I − qI_{(q+1)q}⊗J_q + I⊗J_{q²} + (q−1)J;
/// - N_βN_β′ = qN_{ββ′/(β+β′)} + 2I⊗J_{q²} + (q−2)J when β + β′ ≠ 0;
/// - N_β(I_{(q+1)q}⊗J_q) = (I_{(q+1)q}⊗J_q)N_β = J − I⊗J_{q²};
/// - N_β(I⊗J_{q²}) = (I⊗J_{q²})N_β = q(J − I⊗J_{q²});
/// - Σ_β N_β = (J − I) ⊗ (qI_{q²} + (J_q − I_q)⊗J_q);
///
/// plus pairwise commutation and N_β ∘ A3 = A3.
pub fn check_prop41(ctx: &GddContext) -> Result<CheckReport> {
    check_prop41_with(ctx, &ctx.incidences()?)
}

/// [`check_prop41`] on supplied matrices (`ns[i]` is N_β for the element
/// of canonical index i + 1), so that corrupted inputs can be tested.
pub fn check_prop41_with(ctx: &GddContext, ns: &[IntMatrix]) -> Result<CheckReport> {
    let (q, v) = (ctx.q() as i64, ctx.vertex_count());
    let f = ctx.spec_r();
    let i_v = IntMatrix::identity(v);
    let j_v = IntMatrix::all_ones(v);
    let block = ctx.block_ones()?;
    let rows = ctx.row_ones()?;
    let a3 = ctx.a3()?;

    let mut transpose = ClauseBuilder::new("transpose");
    let mut absorb_rows = ClauseBuilder::new("row absorption");
    let mut absorb_blocks = ClauseBuilder::new("block absorption");
    let mut hadamard = ClauseBuilder::new("contains A3");
    let off_blocks = j_v.sub(&block)?;
    let scaled_off_blocks = off_blocks.scale(q)?;
    for b in f.nonzero() {
        let ctx_b = format!("beta={b}");
        let n = n_of(ns, b);
        transpose.expect_eq(&ctx_b, &n.transpose(), n_of(ns, f.neg(b)));
        absorb_rows.expect_eq(&format!("{ctx_b}, right"), &n.mat_mul(&rows)?, &off_blocks);
        absorb_rows.expect_eq(&format!("{ctx_b}, left"), &rows.mat_mul(n)?, &off_blocks);
        absorb_blocks.expect_eq(&format!("{ctx_b}, right"), &n.mat_mul(&block)?, &scaled_off_blocks);
        absorb_blocks.expect_eq(&format!("{ctx_b}, left"), &block.mat_mul(n)?, &scaled_off_blocks);
        hadamard.expect_eq(&ctx_b, &n.hadamard_product(&a3)?, &a3);
    }

    let mut opposite = ClauseBuilder::new("opposite product");
    let mut product = ClauseBuilder::new("product rule");
    let mut commute = ClauseBuilder::new("commutation");
    let opposite_rhs = lin_comb(&[(q * q, &i_v), (-q, &rows), (1, &block), (q - 1, &j_v)])?;
    for_each_pair(f, ns, |b, b2, xy, yx| {
        let ctx_b = format!("beta={b}, beta'={b2}");
        commute.expect_eq(&ctx_b, xy, yx);
        let sum = f.add(b, b2);
        if sum.is_zero() {
            opposite.expect_eq(&ctx_b, xy, &opposite_rhs);
        } else {
            let target = f.div(f.mul(b, b2), sum)?;
            let rhs = lin_comb(&[(q, n_of(ns, target)), (2, &block), (q - 2, &j_v)])?;
            product.expect_eq(&ctx_b, xy, &rhs);
        }
        Ok(())
    })?;

    let mut sum = ClauseBuilder::new("sum");
    let total = ns.iter().try_fold(IntMatrix::zero(v, v), |acc, n| acc.add(n))?;
    let qq = ctx.q() * ctx.q();
    let inner = lin_comb(&[
        (q, &IntMatrix::identity(qq)),
        (1, &off_diagonal(ctx.q()).kronecker(&IntMatrix::all_ones(ctx.q()))?),
    ])?;
    sum.expect_eq("sum over beta", &total, &off_diagonal(ctx.r()).kronecker(&inner)?);

    Ok(CheckReport::new(
        [transpose, opposite, product, absorb_rows, absorb_blocks, sum, commute, hadamard]
            .into_iter()
            .map(ClauseBuilder::finish)
            .collect(),
    ))
}

/// M_β = N_β + I_{q+1} ⊗ (J_{q²} − I_q⊗J_q).
pub fn sgdd_matrix(ctx: &GddContext, n: &IntMatrix) -> Result<IntMatrix> {
    let q = ctx.q();
    let within = IntMatrix::all_ones(q * q).sub(&IntMatrix::identity(q).kronecker(&IntMatrix::all_ones(q))?)?;
    n.add(&IntMatrix::identity(ctx.r()).kronecker(&within)?)
}

/// For every β, M_β is a symmetric group divisible design with parameters
/// ((q+1)q², 2q²−q, q+1, q², q(q−1), 3(q−1)) whose groups are the q+1
/// consecutive runs of q² vertices, and
/// M_βM_βᵀ = q²I + (q−1)(q−3)I⊗J_{q²} + 3(q−1)J.
pub fn check_corollary(ctx: &GddContext) -> Result<CheckReport> {
    check_corollary_with(ctx, &ctx.incidences()?)
}

pub fn check_corollary_with(ctx: &GddContext, ns: &[IntMatrix]) -> Result<CheckReport> {
    let (q, v) = (ctx.q() as i64, ctx.vertex_count());
    let block = ctx.block_ones()?;
    let rhs = lin_comb(&[
        (q * q, &IntMatrix::identity(v)),
        ((q - 1) * (q - 3), &block),
        (3 * (q - 1), &IntMatrix::all_ones(v)),
    ])?;
    let (k, l1, l2) = (2 * q * q - q, q * (q - 1), 3 * (q - 1));
    let mut product = ClauseBuilder::new("SGDD product");
    let mut design = ClauseBuilder::new("SGDD parameters");
    for b in ctx.spec_r().nonzero() {
        let ctx_b = format!("beta={b}");
        let m = sgdd_matrix(ctx, n_of(ns, b))?;
        product.expect_eq(&ctx_b, &m.mat_mul(&m.transpose())?, &rhs);
        let mut clauses = vec![sgdd_clause(&ctx_b, &m, v, k, ctx.r(), ctx.q() * ctx.q(), l1, l2)?];
        if l1 == l2 {
            clauses.push(symmetric_design_clause(&ctx_b, &m, v, k, l1)?);
        }
        for c in clauses {
            match c.witness {
                Some(w) => {
                    design.fail_with(w, format!("{ctx_b}: {}", c.note.unwrap_or_default()));
                }
                None => {
                    design.expect(c.passed, || format!("{ctx_b}: {}", c.note.unwrap_or_default()));
                }
            }
        }
    }
    Ok(CheckReport::new(vec![product.finish(), design.finish()]))
}

/// Classes A0 = I, A1 = I⊗I_q⊗(J_q−I_q), A2 = I⊗(J_q−I_q)⊗J_q,
/// A3 = (J−I)⊗I_{q²}, A4 = (J−I)⊗I_q⊗(J_q−I_q), A_{5,β} = N_β − A3,
/// together with the relation sets they must equal. Fails with
/// `ConstructionMismatch` if the two forms disagree.
pub fn build_gdd_scheme(ctx: &GddContext) -> Result<(SchemeInstance, TranslationData)> {
    build_gdd_scheme_with(ctx, &ctx.incidences()?)
}

pub fn build_gdd_scheme_with(ctx: &GddContext, ns: &[IntMatrix]) -> Result<(SchemeInstance, TranslationData)> {
    let (r, q) = (ctx.r(), ctx.q());
    let (ir, iq) = (IntMatrix::identity(r), IntMatrix::identity(q));
    let (jr, jq) = (off_diagonal(r), off_diagonal(q));
    let a3 = ctx.a3()?;
    let mut classes = vec![
        (relation_label(None, 0), IntMatrix::identity(r * q * q)),
        (relation_label(None, 1), kron(&[&ir, &iq, &jq])?),
        (relation_label(None, 2), kron(&[&ir, &jq, &IntMatrix::all_ones(q)])?),
        (relation_label(None, 3), a3.clone()),
        (relation_label(None, 4), kron(&[&jr, &iq, &jq])?),
    ];
    for b in ctx.spec_r().nonzero() {
        classes.push((relation_label(Some(b), 5), n_of(ns, b).sub(&a3)?));
    }
    let scheme = SchemeInstance::new(classes)?;
    let t = gdd_relations(ctx)?;
    ensure_matches_relations(&scheme, &t)?;
    Ok((scheme, t))
}

/// The relation sets N_i = R_i(0):
///
/// - N1 = {(0, 0, a) : a ≠ 0};
/// - N2 = {(0, a1, a2) : a1 ≠ 0};
/// - N3 = {(b, 0, 0) : b ≠ 0};
/// - N4 = {(b, 0, a) : b ≠ 0, a ≠ 0};
/// - N_{5,β} = {(b, a, φ(βb)a) : b ≠ 0, a ≠ 0}.
pub fn gdd_relations(ctx: &GddContext) -> Result<TranslationData> {
    let (fq, fr) = (ctx.spec_q(), ctx.spec_r());
    let factors = vec![fr.clone(), fq.clone(), fq.clone()];
    let enc = |b: FieldElement, a1: FieldElement, a2: FieldElement| encode(&factors, &[b, a1, a2]);
    let zero = FieldElement::ZERO;
    let mut rels = vec![
        Relation::new(relation_label(None, 0), vec![0]),
        Relation::new(relation_label(None, 1), fq.nonzero().map(|a| enc(zero, zero, a)).collect()),
        Relation::new(
            relation_label(None, 2),
            fq.nonzero()
                .flat_map(|a1| fq.elements().map(move |a2| (a1, a2)))
                .map(|(a1, a2)| enc(zero, a1, a2))
                .collect(),
        ),
        Relation::new(relation_label(None, 3), fr.nonzero().map(|b| enc(b, zero, zero)).collect()),
        Relation::new(
            relation_label(None, 4),
            fr.nonzero().flat_map(|b| fq.nonzero().map(move |a| (b, a))).map(|(b, a)| enc(b, zero, a)).collect(),
        ),
    ];
    for beta in fr.nonzero() {
        let mut elems = Vec::new();
        for b in fr.nonzero() {
            let AuxLabel::Field(c) = ctx.phi().image(fr.mul(beta, b)) else {
                return Err(Error::ConstructionMismatch(format!("φ({}) is not in 𝔽_q", fr.mul(beta, b))));
            };
            elems.extend(fq.nonzero().map(|a| enc(b, a, fq.mul(c, a))));
        }
        rels.push(Relation::new(relation_label(Some(beta), 5), elems));
    }
    TranslationData::new(factors, rels)
}

/// Eigenspace of the character χ_{β′,α1′,α2′}:
///
/// - V0: the trivial character;
/// - V1: β′ = 0, α1′ ≠ 0, α2′ = 0;
/// - V2: β′ = 0, α2′ ≠ 0;
/// - V3: β′ ≠ 0, α1′ = α2′ = 0;
/// - V4: β′ ≠ 0, α1′ ≠ 0, α2′ = 0;
/// - V_{5,β̃}: β′ ≠ 0, α2′ ≠ 0, with β̃ = β′φ⁻¹(−α1′/α2′).
pub fn gdd_character_label(ctx: &GddContext, c: &[FieldElement]) -> Result<String> {
    let (fq, fr) = (ctx.spec_q(), ctx.spec_r());
    let [b, a1, a2] = [c[0], c[1], c[2]];
    Ok(match (b.is_zero(), a1.is_zero(), a2.is_zero()) {
        (true, true, true) => eigenspace_label(None, 0),
        (true, false, true) => eigenspace_label(None, 1),
        (true, _, false) => eigenspace_label(None, 2),
        (false, true, true) => eigenspace_label(None, 3),
        (false, false, true) => eigenspace_label(None, 4),
        (false, _, false) => {
            let label = AuxLabel::Field(fq.div(fq.neg(a1), a2)?);
            let pre =
                ctx.phi().preimage(label).ok_or_else(|| Error::InvalidParameter(format!("{label} has no preimage")))?;
            eigenspace_label(Some(fr.mul(b, pre)), 5)
        }
    })
}

/// The closed-form first eigenmatrix. With χ the canonical additive
/// character of 𝔽_{q+1}:
///
/// |          | R0 | R1  | R2     | R3 | R4     | R_{5,β}     |
/// |----------|----|-----|--------|----|--------|-------------|
/// | V0       | 1  | q−1 | q(q−1) | q  | q(q−1) | q(q−1)      |
/// | V1       | 1  | q−1 | −q     | q  | q(q−1) | −q          |
/// | V2       | 1  | −1  | 0      | q  | −q     | 0           |
/// | V3       | 1  | q−1 | q(q−1) | −1 | −q+1   | −q+1        |
/// | V4       | 1  | q−1 | −q     | −1 | −q+1   | 1           |
/// | V_{5,β̃} | 1  | −1  | 0      | −1 | 1      | qχ(β̃/β)+1  |
///
/// Multiplicities are counted from the spanning characters.
pub fn theoretical_eigenmatrix_gdd(ctx: &GddContext) -> Result<Eigenmatrix> {
    let (q, fr) = (ctx.q() as i64, ctx.spec_r());
    let n = num_integer::lcm(fr.characteristic(), ctx.spec_q().characteristic());
    let int = |k: i64| Cyclotomic::from_int(n, k);
    let nonzero: Vec<FieldElement> = fr.nonzero().collect();
    let fixed: [([i64; 5], i64); 5] = [
        ([1, q - 1, q * (q - 1), q, q * (q - 1)], q * (q - 1)),
        ([1, q - 1, -q, q, q * (q - 1)], -q),
        ([1, -1, 0, q, -q], 0),
        ([1, q - 1, q * (q - 1), -1, 1 - q], 1 - q),
        ([1, q - 1, -q, -1, 1 - q], 1),
    ];
    let mut row_labels = Vec::new();
    let mut entries = Vec::new();
    for (i, (head, tail)) in fixed.iter().enumerate() {
        row_labels.push(eigenspace_label(None, i));
        let mut row: Vec<Cyclotomic> = head.iter().map(|&k| int(k)).collect();
        row.extend(nonzero.iter().map(|_| int(*tail)));
        entries.push(row);
    }
    for &t in &nonzero {
        row_labels.push(eigenspace_label(Some(t), 5));
        let mut row: Vec<Cyclotomic> = [1, -1, 0, -1, 1].iter().map(|&k| int(k)).collect();
        for &s in &nonzero {
            let chi = fr.additive_character(fr.div(t, s)?, n)?;
            row.push(&(&chi * &int(q)) + &int(1));
        }
        entries.push(row);
    }
    let factors = [fr.clone(), ctx.spec_q().clone(), ctx.spec_q().clone()];
    let counts = count_characters(&factors, |c| gdd_character_label(ctx, c))?;
    let multiplicities = row_labels.iter().map(|l| counts.get(l).copied().unwrap_or(0)).collect();
    let mut col_labels: Vec<String> = (0..5).map(|i| relation_label(None, i)).collect();
    col_labels.extend(nonzero.iter().map(|&s| relation_label(Some(s), 5)));
    Eigenmatrix::new(n, row_labels, multiplicities, col_labels, entries)
}
