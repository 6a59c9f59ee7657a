//! The nine acceptance criteria, one pass/fail line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::HashMap;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use assoc_schemes::check::CheckReport;
use assoc_schemes::finite_field::{FieldElement, FieldSpec};
use assoc_schemes::gdd::{self, GddContext};
use assoc_schemes::gh_aux::{check_aux_identities, AuxFamily, AuxLabel};
use assoc_schemes::incidence::{reciprocal_label_map, Bijection};
use assoc_schemes::int_linalg::IntMatrix;
use assoc_schemes::intro;
use assoc_schemes::latin::check_perm_calculus;
use assoc_schemes::scheme::{
    check_self_dual, eigenmatrix_from_characters, is_symmetric_scheme, second_eigenmatrix, sgdd_clause,
    symmetric_design_clause, verify_axioms, verify_eigenvectors, Eigenmatrix, SchemeInstance, TranslationData,
};
use assoc_schemes::twin::{self, TwinContext};

const TWIN_QS: [u64; 5] = [2, 3, 5, 7, 9];
const GDD_QS: [u64; 5] = [2, 3, 4, 7, 8];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

fn failures(r: &CheckReport) -> String {
    r.failures().map(|c| format!("{} ({})", c.name, c.note.clone().unwrap_or_default())).collect::<Vec<_>>().join("; ")
}

enum Ctx {
    Twin(TwinContext),
    Gdd(GddContext),
}

struct Built {
    ctx: Ctx,
    scheme: SchemeInstance,
    t: TranslationData,
}

impl Built {
    fn labeled_eigen(&self) -> Eigenmatrix {
        let ce = eigenmatrix_from_characters(&self.t).unwrap();
        match &self.ctx {
            Ctx::Twin(c) => ce.labeled(&self.t, |x| twin::twin_character_label(c, x)).unwrap(),
            Ctx::Gdd(c) => ce.labeled(&self.t, |x| gdd::gdd_character_label(c, x)).unwrap(),
        }
    }

    fn theory(&self) -> Eigenmatrix {
        match &self.ctx {
            Ctx::Twin(c) => twin::theoretical_eigenmatrix_twin(c).unwrap(),
            Ctx::Gdd(c) => gdd::theoretical_eigenmatrix_gdd(c).unwrap(),
        }
    }
}

#[derive(Default)]
struct Cache(HashMap<(&'static str, u64), Built>);

impl Cache {
    fn twin(&mut self, q: u64) -> &Built {
        self.0.entry(("twin", q)).or_insert_with(|| {
            let c = twin::make_twin_context(q, None).unwrap();
            let (scheme, t) = twin::build_twin_scheme(&c).unwrap();
            Built { ctx: Ctx::Twin(c), scheme, t }
        })
    }

    fn gdd(&mut self, q: u64) -> &Built {
        self.0.entry(("gdd", q)).or_insert_with(|| {
            let c = gdd::make_gdd_context(q, None).unwrap();
            let (scheme, t) = gdd::build_gdd_scheme(&c).unwrap();
            Built { ctx: Ctx::Gdd(c), scheme, t }
        })
    }
}

fn criterion_1(cache: &mut Cache) -> Outcome {
    let b = cache.twin(3);
    let Ctx::Twin(ctx) = &b.ctx else { unreachable!() };
    let ax = verify_axioms(&b.scheme).unwrap();
    if !ax.all_passed() {
        return Outcome::new(false, format!("axioms: {}", failures(&ax.clauses)));
    }
    for (i, n) in ctx.incidences().unwrap().iter().enumerate() {
        let c = symmetric_design_clause("design", n, 45, 12, 3).unwrap();
        if !c.passed {
            return Outcome::new(false, format!("N_{} is not a (45,12,3) design", i + 1));
        }
    }
    let (rows, cols) = reciprocal_label_map(ctx.spec_r(), 3).unwrap();
    let p = b.labeled_eigen().relabeled(&rows, &cols);
    match p.difference_by_label(&common::printed_twin_q3()) {
        None => Outcome::new(
            true,
            "45 vertices, 7 classes, axioms pass, (45,12,3) designs; P equals the printed table with V_t↔V_{1/t}, R_s↔R_{1/s}",
        ),
        Some(d) => Outcome::new(false, d),
    }
}

fn criterion_2(cache: &mut Cache) -> Outcome {
    let b = cache.gdd(4);
    let Ctx::Gdd(ctx) = &b.ctx else { unreachable!() };
    if b.scheme.len() != 9 {
        return Outcome::new(false, format!("{} classes", b.scheme.len()));
    }
    let ax = verify_axioms(&b.scheme).unwrap();
    if !ax.all_passed() {
        return Outcome::new(false, format!("axioms: {}", failures(&ax.clauses)));
    }
    let cor = gdd::check_corollary(ctx).unwrap();
    if !cor.all_passed() {
        return Outcome::new(false, format!("corollary: {}", failures(&cor)));
    }
    for n in ctx.incidences().unwrap() {
        let m = gdd::sgdd_matrix(ctx, &n).unwrap();
        if !sgdd_clause("sgdd", &m, 80, 28, 5, 16, 12, 9).unwrap().passed {
            return Outcome::new(false, "an M_β is not an SGDD(80,28,5,16,12,9)");
        }
    }
    // The printed table cannot be matched: its rows V2..V5 do not sum to
    // zero, which every nontrivial eigenmatrix row must. Compare against
    // the table with those cells corrected, and confirm the literal table
    // is inconsistent rather than silently skipping it.
    let printed = common::printed_gdd_q4();
    let bad_rows = common::nonzero_row_sums(&printed);
    let (rows, cols) = reciprocal_label_map(ctx.spec_r(), 5).unwrap();
    let p = b.labeled_eigen().relabeled(&rows, &cols);
    let literal = p.difference_by_label(&printed);
    let theory = b.theory().relabeled(&rows, &cols);
    let corrected_ok = p.difference_by_label(&theory).is_none() && common::nonzero_row_sums(&p).is_empty();
    let detail = format!(
        "80 vertices, 9 classes, axioms pass, SGDD (80,28,5,16,12,9) holds; literal printed table {} (printed rows {} have nonzero sums, so no scheme has that table); P equals the corrected table",
        if literal.is_none() { "MATCHES" } else { "does not match" },
        bad_rows.join(", ")
    );
    Outcome::new(corrected_ok && !bad_rows.is_empty() && literal.is_some(), detail)
}

fn criterion_3() -> Outcome {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let spec = FieldSpec::of_order(q).unwrap();
        let aux = check_aux_identities(&AuxFamily::new(&spec).unwrap()).unwrap();
        let perm = check_perm_calculus(&spec).unwrap();
        if aux.clauses.len() != 5 || perm.clauses.len() != 4 || !aux.all_passed() || !perm.all_passed() {
            return Outcome::new(false, format!("q={q}: {} {}", failures(&aux), failures(&perm)));
        }
    }
    Outcome::new(true, "5 auxiliary-matrix clauses and 4 permutation clauses for q in {2,3,4,5,7,8,9}")
}

fn criterion_4() -> Outcome {
    for q in TWIN_QS {
        let r = twin::check_prop31(&twin::make_twin_context(q, None).unwrap()).unwrap();
        if !r.all_passed() {
            return Outcome::new(false, format!("twin q={q}: {}", failures(&r)));
        }
    }
    for q in GDD_QS {
        let ctx = gdd::make_gdd_context(q, None).unwrap();
        for r in [gdd::check_prop41(&ctx).unwrap(), gdd::check_corollary(&ctx).unwrap()] {
            if !r.all_passed() {
                return Outcome::new(false, format!("gdd q={q}: {}", failures(&r)));
            }
        }
    }
    Outcome::new(true, "twin q in {2,3,5,7,9}; gdd q in {2,3,4,7,8}")
}

fn criterion_5(cache: &mut Cache) -> Outcome {
    for q in TWIN_QS {
        let sym = is_symmetric_scheme(&cache.twin(q).scheme);
        if sym != (q == 2) {
            return Outcome::new(false, format!("twin q={q} symmetric={sym}"));
        }
    }
    for q in GDD_QS {
        let sym = is_symmetric_scheme(&cache.gdd(q).scheme);
        if sym != (q % 2 == 1) {
            return Outcome::new(false, format!("gdd q={q} symmetric={sym}"));
        }
    }
    Outcome::new(true, "twin symmetric only at q=2; gdd symmetric exactly for odd q")
}

fn criterion_6(cache: &mut Cache) -> Outcome {
    let keys: Vec<(bool, u64)> = TWIN_QS.iter().map(|&q| (true, q)).chain(GDD_QS.iter().map(|&q| (false, q))).collect();
    for (is_twin, q) in keys {
        let name = if is_twin { "twin" } else { "gdd" };
        let b = if is_twin { cache.twin(q) } else { cache.gdd(q) };
        let p = b.labeled_eigen();
        if let Some(d) = p.difference_by_label(&b.theory()) {
            return Outcome::new(false, format!("{name} q={q}: closed form differs: {d}"));
        }
        if q <= 4 {
            let ce = eigenmatrix_from_characters(&b.t).unwrap();
            let c = verify_eigenvectors(&b.scheme, &b.t, &ce).unwrap();
            if !c.passed {
                return Outcome::new(false, format!("{name} q={q}: {}", c.note.unwrap_or_default()));
            }
        }
        let v = b.scheme.vertex_count();
        let second = match second_eigenmatrix(&p, v) {
            Ok(s) => s,
            Err(e) => return Outcome::new(false, format!("{name} q={q}: PQ = vI fails: {e}")),
        };
        if check_self_dual(&p, &second).is_none() {
            return Outcome::new(false, format!("{name} q={q}: no self-duality pairing"));
        }
    }
    Outcome::new(
        true,
        "closed form = character sums for all 10 schemes, eigenvectors checked for q<=4, PQ = vI, self-dual pairing found",
    )
}

fn criterion_7() -> Outcome {
    for q in [3u64, 5, 7, 9] {
        let t = intro::build_intro_relations(q).unwrap();
        let ax = verify_axioms(&t.scheme().unwrap()).unwrap();
        if !ax.all_passed() {
            return Outcome::new(false, format!("q={q}: {}", failures(&ax.clauses)));
        }
        let d = intro::verify_difference_set(&intro::intro_difference_subset(&t), &t).unwrap();
        let (v, k, l) = intro::expected_difference_parameters(q);
        if !d.verified || (d.v, d.k, d.lambda) != (v, k, Some(l)) {
            return Outcome::new(false, format!("q={q}: found ({}, {}, {:?})", d.v, d.k, d.lambda));
        }
    }
    Outcome::new(true, "q in {3,5,7,9}: axioms pass, difference sets (15,7,3) (35,17,8) (63,31,15) (99,49,24)")
}

fn flip(m: &IntMatrix, i: usize, j: usize) -> IntMatrix {
    m.with_entry(i, j, 1 - m.get(i, j))
}

/// Flips one bit of either an incidence matrix (caught by the identity
/// checks) or a class matrix (caught by the axioms), returning whether a
/// clause failed with a coordinate witness.
fn mutation_caught(
    rng: &mut StdRng,
    ns: &[IntMatrix],
    scheme: &SchemeInstance,
    check_ns: &dyn Fn(&[IntMatrix]) -> CheckReport,
) -> bool {
    let v = scheme.vertex_count();
    let (i, j) = (rng.gen_range(0..v), rng.gen_range(0..v));
    let report = if rng.gen_bool(0.5) {
        let mut m = ns.to_vec();
        let k = rng.gen_range(0..m.len());
        m[k] = flip(&m[k], i, j);
        check_ns(&m)
    } else {
        let c = rng.gen_range(0..scheme.len());
        verify_axioms(&scheme.with_matrix(c, flip(scheme.matrix(c), i, j))).unwrap().clauses
    };
    let caught = report.failures().any(|c| c.witness.is_some());
    caught
}

fn criterion_8(cache: &mut Cache) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let b = cache.twin(3);
    let Ctx::Twin(ctx) = &b.ctx else { unreachable!() };
    let ns = ctx.incidences().unwrap();
    let check = |m: &[IntMatrix]| twin::check_prop31_with(ctx, m).unwrap();
    let twin_caught = (0..10).filter(|_| mutation_caught(&mut rng, &ns, &b.scheme, &check)).count();
    let b = cache.gdd(4);
    let Ctx::Gdd(ctx) = &b.ctx else { unreachable!() };
    let ns = ctx.incidences().unwrap();
    let check = |m: &[IntMatrix]| gdd::check_prop41_with(ctx, m).unwrap();
    let gdd_caught = (0..10).filter(|_| mutation_caught(&mut rng, &ns, &b.scheme, &check)).count();
    Outcome::new(
        twin_caught == 10 && gdd_caught == 10,
        format!("witnessed failures: twin q=3 {twin_caught}/10, gdd q=4 {gdd_caught}/10"),
    )
}

fn criterion_9(cache: &mut Cache) -> Outcome {
    let default = cache.twin(3).labeled_eigen();
    let f = |i: u32| AuxLabel::Field(FieldElement(i));
    let alternatives = [
        vec![AuxLabel::X, f(2), AuxLabel::Y, f(0), f(1)],
        vec![AuxLabel::X, f(0), f(1), f(2), AuxLabel::Y],
        vec![AuxLabel::X, f(1), f(0), AuxLabel::Y, f(2)],
    ];
    for images in alternatives {
        let phi = Bijection::new(images, 5, 3, true).unwrap();
        let ctx = twin::make_twin_context(3, Some(phi.clone())).unwrap();
        let (s, t) = twin::build_twin_scheme(&ctx).unwrap();
        if !verify_axioms(&s).unwrap().all_passed() {
            return Outcome::new(false, format!("axioms fail for φ = {:?}", phi.images()));
        }
        let p = eigenmatrix_from_characters(&t).unwrap().labeled(&t, |c| twin::twin_character_label(&ctx, c)).unwrap();
        if let Some(d) = p.difference_by_label(&default) {
            return Outcome::new(false, format!("φ = {:?}: {d}", phi.images()));
        }
    }
    Outcome::new(true, "three alternative bijections give passing axioms and the same labelled eigenmatrix")
}

#[test]
fn acceptance() {
    let mut cache = Cache::default();
    type Criterion<'a> = (&'a str, Box<dyn Fn(&mut Cache) -> Outcome>);
    let criteria: Vec<Criterion> = vec![
        ("twin q=3 golden", Box::new(criterion_1)),
        ("gdd q=4 golden", Box::new(criterion_2)),
        ("lemma suites", Box::new(|_| criterion_3())),
        ("proposition suites", Box::new(|_| criterion_4())),
        ("symmetry boundary", Box::new(criterion_5)),
        ("eigen cross-validation", Box::new(criterion_6)),
        ("intro scheme", Box::new(|_| criterion_7())),
        ("fault injection", Box::new(criterion_8)),
        ("phi independence", Box::new(criterion_9)),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run(&mut cache);
        all &= o.passed;
        println!(
            "criterion {} [{}] {name}: {} ({:.2}s)",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    assert!(all, "some acceptance criteria failed");
}
