//! Symmetric designs and a (q+3)-class translation scheme from twin prime
//! powers q and q+2.
//!
//! Vertices are 𝔽_{q+2} × 𝔽_q × 𝔽_q, encoded as β·q² + α1·q + α2.

use crate::check::{CheckReport, ClauseBuilder};
use crate::error::{Error, Result};
use crate::exact_arith::Cyclotomic;
use crate::finite_field::{FieldElement, FieldSpec};
use crate::gh_aux::{AuxFamily, AuxLabel};
use crate::incidence::{
    self, count_characters, eigenspace_label, for_each_pair, kron, off_diagonal, relation_label, Bijection,
};
use crate::int_linalg::{lin_comb, IntMatrix};
use crate::latin::latin_square;
use crate::scheme::{
    encode, ensure_matches_relations, symmetric_design_clause, Eigenmatrix, Relation, SchemeInstance, TranslationData,
};

/// Fields 𝔽_q and 𝔽_{q+2}, the auxiliary matrices over 𝔽_q and the
/// bijection φ: 𝔽_{q+2} → 𝔽_q ∪ {x, y}.
#[derive(Clone, Debug)]
pub struct TwinContext {
    spec_q: FieldSpec,
    spec_r: FieldSpec,
    phi: Bijection,
    aux: AuxFamily,
}

/// Builds the context for the pair (q, q+2). Without an explicit φ the
/// default sends 0 ↦ x, 1 ↦ y and the remaining elements of 𝔽_{q+2}, in
/// canonical order, to 𝔽_q in canonical order.
pub fn make_twin_context(q: u64, phi: Option<Bijection>) -> Result<TwinContext> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} must be at least 2")));
    }
    let spec_q = FieldSpec::of_order(q)?;
    let spec_r = FieldSpec::of_order(q + 2)?;
    let (r, qq) = (spec_r.order() as usize, q as usize);
    let phi = match phi {
        Some(p) => Bijection::new(p.images().to_vec(), r, qq, true)?,
        None => Bijection::canonical(r, qq, true)?,
    };
    let aux = AuxFamily::new(&spec_q)?;
    Ok(TwinContext { spec_q, spec_r, phi, aux })
}

impl TwinContext {
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
        incidence::incidence(&self.spec_r, &self.aux, &self.phi, beta)
    }

    /// N_β for every nonzero β in canonical order.
    pub fn incidences(&self) -> Result<Vec<IntMatrix>> {
        self.spec_r.nonzero().map(|b| self.incidence_n(b)).collect()
    }

    /// (J_{q+2} − I) ⊗ I_{q²}.
    fn a1(&self) -> Result<IntMatrix> {
        off_diagonal(self.r()).kronecker(&IntMatrix::identity(self.q() * self.q()))
    }

    /// I_{q+2} ⊗ J_{q²}.
    fn block_ones(&self) -> Result<IntMatrix> {
        IntMatrix::identity(self.r()).kronecker(&IntMatrix::all_ones(self.q() * self.q()))
    }
}

fn n_of(ns: &[IntMatrix], b: FieldElement) -> &IntMatrix {
    &ns[b.index() - 1]
}

/// Checks the identities of the incidence matrices for every β, β′:
///
/// - N_βᵀ = N_{−β} (and L_βᵀ = L_{−β});
/// - N_βN_{−β} = q²I + qJ;
/// - N_βN_β′ = qN_{ββ′/(β+β′)} + 2I⊗J_{q²} + (q−1)J when β + β′ ≠ 0;
/// - N_β(I⊗J_{q²}) = (I⊗J_{q²})N_β = q(J − I⊗J_{q²});
/// - Σ_β N_β = (J − I) ⊗ (qI_{q²} + J_{q²});
///
/// plus pairwise commutation, N_β ∘ A1 = A1, and the symmetric design
/// equation with (q²(q+2), q(q+1), q).
pub fn check_prop31(ctx: &TwinContext) -> Result<CheckReport> {
    check_prop31_with(ctx, &ctx.incidences()?)
}

/// [`check_prop31`] on supplied matrices (`ns[i]` is N_β for the element
/// of canonical index i + 1), so that corrupted inputs can be tested.
pub fn check_prop31_with(ctx: &TwinContext, ns: &[IntMatrix]) -> Result<CheckReport> {
    let (q, v) = (ctx.q() as i64, ctx.vertex_count());
    let f = ctx.spec_r();
    let i_v = IntMatrix::identity(v);
    let j_v = IntMatrix::all_ones(v);
    let block = ctx.block_ones()?;
    let a1 = ctx.a1()?;

    let mut latin = ClauseBuilder::new("latin transpose");
    let mut transpose = ClauseBuilder::new("transpose");
    let mut absorb = ClauseBuilder::new("block absorption");
    let mut hadamard = ClauseBuilder::new("contains A1");
    let mut design = ClauseBuilder::new("symmetric design");
    let absorbed = lin_comb(&[(q, &j_v), (-q, &block)])?;
    for b in f.nonzero() {
        let ctx_b = format!("beta={b}");
        let n = n_of(ns, b);
        latin.expect(latin_square(f, b)?.transpose() == latin_square(f, f.neg(b))?, || ctx_b.clone());
        transpose.expect_eq(&ctx_b, &n.transpose(), n_of(ns, f.neg(b)));
        absorb.expect_eq(&format!("{ctx_b}, right"), &n.mat_mul(&block)?, &absorbed);
        absorb.expect_eq(&format!("{ctx_b}, left"), &block.mat_mul(n)?, &absorbed);
        hadamard.expect_eq(&ctx_b, &n.hadamard_product(&a1)?, &a1);
        let c = symmetric_design_clause(&ctx_b, n, v, q * (q + 1), q)?;
        match c.witness {
            Some(w) => {
                design.fail_with(w, format!("{ctx_b}: {}", c.note.unwrap_or_default()));
            }
            None => {
                design.expect(c.passed, || format!("{ctx_b}: {}", c.note.unwrap_or_default()));
            }
        }
    }

    let mut opposite = ClauseBuilder::new("opposite product");
    let mut product = ClauseBuilder::new("product rule");
    let mut commute = ClauseBuilder::new("commutation");
    let opposite_rhs = lin_comb(&[(q * q, &i_v), (q, &j_v)])?;
    for_each_pair(f, ns, |b, b2, xy, yx| {
        let ctx_b = format!("beta={b}, beta'={b2}");
        commute.expect_eq(&ctx_b, xy, yx);
        let sum = f.add(b, b2);
        if sum.is_zero() {
            opposite.expect_eq(&ctx_b, xy, &opposite_rhs);
        } else {
            let target = f.div(f.mul(b, b2), sum)?;
            let rhs = lin_comb(&[(q, n_of(ns, target)), (2, &block), (q - 1, &j_v)])?;
            product.expect_eq(&ctx_b, xy, &rhs);
        }
        Ok(())
    })?;

    let mut sum = ClauseBuilder::new("sum");
    let total = ns.iter().try_fold(IntMatrix::zero(v, v), |acc, n| acc.add(n))?;
    let qq = ctx.q() * ctx.q();
    let inner = lin_comb(&[(q, &IntMatrix::identity(qq)), (1, &IntMatrix::all_ones(qq))])?;
    sum.expect_eq("sum over beta", &total, &off_diagonal(ctx.r()).kronecker(&inner)?);

    Ok(CheckReport::new(
        [latin, transpose, opposite, product, absorb, sum, commute, hadamard, design]
            .into_iter()
            .map(ClauseBuilder::finish)
            .collect(),
    ))
}

/// Classes A0 = I, A1 = (J−I)⊗I_{q²}, A2 = I⊗(J_{q²}−I), A_{3,β} = N_β − A1
/// together with the relation sets they must equal. Fails with
/// `ConstructionMismatch` if the two forms disagree.
pub fn build_twin_scheme(ctx: &TwinContext) -> Result<(SchemeInstance, TranslationData)> {
    build_twin_scheme_with(ctx, &ctx.incidences()?)
}

pub fn build_twin_scheme_with(ctx: &TwinContext, ns: &[IntMatrix]) -> Result<(SchemeInstance, TranslationData)> {
    let (r, qq) = (ctx.r(), ctx.q() * ctx.q());
    let a1 = ctx.a1()?;
    let mut classes = vec![
        (relation_label(None, 0), IntMatrix::identity(r * qq)),
        (relation_label(None, 1), a1.clone()),
        (relation_label(None, 2), kron(&[&IntMatrix::identity(r), &off_diagonal(qq)])?),
    ];
    for b in ctx.spec_r().nonzero() {
        classes.push((relation_label(Some(b), 3), n_of(ns, b).sub(&a1)?));
    }
    let scheme = SchemeInstance::new(classes)?;
    let t = twin_relations(ctx)?;
    ensure_matches_relations(&scheme, &t)?;
    Ok((scheme, t))
}

/// The relation sets N_i = R_i(0).
pub fn twin_relations(ctx: &TwinContext) -> Result<TranslationData> {
    let (fq, fr) = (ctx.spec_q(), ctx.spec_r());
    let factors = vec![fr.clone(), fq.clone(), fq.clone()];
    let enc = |b: FieldElement, a1: FieldElement, a2: FieldElement| encode(&factors, &[b, a1, a2]);
    let zero = FieldElement::ZERO;
    let mut rels = vec![
        Relation::new(relation_label(None, 0), vec![0]),
        Relation::new(relation_label(None, 1), fr.nonzero().map(|b| enc(b, zero, zero)).collect()),
        Relation::new(
            relation_label(None, 2),
            fq.elements()
                .flat_map(|a1| fq.elements().map(move |a2| (a1, a2)))
                .filter(|&(a1, a2)| !(a1.is_zero() && a2.is_zero()))
                .map(|(a1, a2)| enc(zero, a1, a2))
                .collect(),
        ),
    ];
    for beta in fr.nonzero() {
        let elems = incidence::incidence_support(fr, fq, ctx.phi(), beta)
            .into_iter()
            .filter(|(_, a1, a2)| !(a1.is_zero() && a2.is_zero()))
            .map(|(b, a1, a2)| enc(b, a1, a2))
            .collect();
        rels.push(Relation::new(relation_label(Some(beta), 3), elems));
    }
    TranslationData::new(factors, rels)
}

/// Eigenspace of the character χ_{β′,α1′,α2′}:
///
/// - V0: the trivial character;
/// - V1: β′ ≠ 0, α1′ = α2′ = 0;
/// - V2: β′ = 0, (α1′, α2′) ≠ (0, 0);
/// - V_{3,β̃}: β′ ≠ 0 and either α2′ ≠ 0 with β̃ = β′φ⁻¹(−α1′/α2′), or
///   α2′ = 0 ≠ α1′ with β̃ = β′φ⁻¹(y).
pub fn twin_character_label(ctx: &TwinContext, c: &[FieldElement]) -> Result<String> {
    let (fq, fr) = (ctx.spec_q(), ctx.spec_r());
    let [b, a1, a2] = [c[0], c[1], c[2]];
    let alpha_zero = a1.is_zero() && a2.is_zero();
    Ok(match (b.is_zero(), alpha_zero) {
        (true, true) => eigenspace_label(None, 0),
        (false, true) => eigenspace_label(None, 1),
        (true, false) => eigenspace_label(None, 2),
        (false, false) => {
            let label = if a2.is_zero() { AuxLabel::Y } else { AuxLabel::Field(fq.div(fq.neg(a1), a2)?) };
            let pre =
                ctx.phi().preimage(label).ok_or_else(|| Error::InvalidParameter(format!("{label} has no preimage")))?;
            eigenspace_label(Some(fr.mul(b, pre)), 3)
        }
    })
}

/// The closed-form first eigenmatrix. With χ the canonical additive
/// character of 𝔽_{q+2}:
///
/// |            | R0 | R1  | R2   | R_{3,β}     |
/// |------------|----|-----|------|-------------|
/// | V0         | 1  | q+1 | q²−1 | q²−1        |
/// | V1         | 1  | −1  | q²−1 | −q+1        |
/// | V2         | 1  | q+1 | −1   | −1          |
/// | V_{3,β̃}   | 1  | −1  | −1   | qχ(β̃/β)+1  |
///
/// Multiplicities are counted from the spanning characters.
pub fn theoretical_eigenmatrix_twin(ctx: &TwinContext) -> Result<Eigenmatrix> {
    let (q, fr) = (ctx.q() as i64, ctx.spec_r());
    let n = num_integer::lcm(fr.characteristic(), ctx.spec_q().characteristic());
    let int = |k: i64| Cyclotomic::from_int(n, k);
    let nonzero: Vec<FieldElement> = fr.nonzero().collect();
    let mut rows = vec![
        (eigenspace_label(None, 0), vec![int(1), int(q + 1), int(q * q - 1)], int(q * q - 1), None),
        (eigenspace_label(None, 1), vec![int(1), int(-1), int(q * q - 1)], int(1 - q), None),
        (eigenspace_label(None, 2), vec![int(1), int(q + 1), int(-1)], int(-1), None),
    ];
    for &t in &nonzero {
        rows.push((eigenspace_label(Some(t), 3), vec![int(1), int(-1), int(-1)], int(0), Some(t)));
    }
    let mut entries = Vec::new();
    for (_, head, tail, t) in &rows {
        let mut row = head.clone();
        for &s in &nonzero {
            row.push(match t {
                None => tail.clone(),
                Some(t) => {
                    let chi = fr.additive_character(fr.div(*t, s)?, n)?;
                    &(&chi * &int(q)) + &int(1)
                }
            });
        }
        entries.push(row);
    }
    let factors = [fr.clone(), ctx.spec_q().clone(), ctx.spec_q().clone()];
    let counts = count_characters(&factors, |c| twin_character_label(ctx, c))?;
    let row_labels: Vec<String> = rows.iter().map(|r| r.0.clone()).collect();
    let multiplicities = row_labels.iter().map(|l| counts.get(l).copied().unwrap_or(0)).collect();
    let mut col_labels: Vec<String> = (0..3).map(|i| relation_label(None, i)).collect();
    col_labels.extend(nonzero.iter().map(|&s| relation_label(Some(s), 3)));
    Eigenmatrix::new(n, row_labels, multiplicities, col_labels, entries)
}
