//! End-to-end runs of one construction, collected into a serializable report.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::check::{CheckReport, Clause};
use crate::error::{Error, Result};
use crate::finite_field::is_prime_power;
use crate::gdd::{self, GddContext};
use crate::incidence::Bijection;
use crate::intro::{self, DifferenceSetReport};
use crate::scheme::{
    check_self_dual, check_translation_duality, check_translation_invariance, eigenmatrix_from_characters,
    is_symmetric_scheme, multiplicities_check, second_eigenmatrix, symmetric_design_clause, verify_axioms,
    verify_eigenvectors, CharacterEigen, Eigenmatrix, SchemeInstance, SelfDuality, TranslationData,
};
use crate::twin::{self, TwinContext};

/// Brute-force eigenvector checks run only up to this q.
pub const EIGENVECTOR_CHECK_MAX_Q: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Twin,
    Gdd,
    Intro,
}

impl Family {
    /// Whether the construction exists for this q.
    pub fn accepts(self, q: u64) -> bool {
        let pp = |n: u64| is_prime_power(n).is_some();
        match self {
            Family::Twin => q >= 2 && pp(q) && pp(q + 2),
            Family::Gdd => q >= 2 && pp(q) && pp(q + 1),
            Family::Intro => q >= 3 && q % 2 == 1 && pp(q) && pp(q + 2),
        }
    }

    /// Every valid q up to `max_q`, ascending.
    pub fn valid_orders(self, max_q: u64) -> Vec<u64> {
        (2..=max_q).filter(|&q| self.accepts(q)).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Twin => "twin",
            Family::Gdd => "gdd",
            Family::Intro => "intro",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "twin" => Ok(Family::Twin),
            "gdd" => Ok(Family::Gdd),
            "intro" => Ok(Family::Intro),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyScope {
    pub axioms: bool,
    pub designs: bool,
    pub props: bool,
}

impl VerifyScope {
    pub const ALL: Self = Self { axioms: true, designs: true, props: true };

    pub fn any(self) -> bool {
        self.axioms || self.designs || self.props
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRequest {
    pub family: Family,
    pub q: u64,
    pub verify: VerifyScope,
    pub eigen: bool,
    pub selfdual: bool,
    pub phi: Option<Bijection>,
}

impl RunRequest {
    pub fn new(family: Family, q: u64) -> Self {
        Self { family, q, verify: VerifyScope::default(), eigen: false, selfdual: false, phi: None }
    }

    /// Everything: all verification scopes, eigenmatrices and self-duality.
    pub fn full(family: Family, q: u64) -> Self {
        Self { verify: VerifyScope::ALL, eigen: true, selfdual: true, ..Self::new(family, q) }
    }
}

/// A named group of clauses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub report: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenSection {
    /// First eigenmatrix from character sums, rows named by the family's
    /// eigenspace labels (`E0`, `E1`, … when the family has none).
    pub first: Eigenmatrix,
    /// Second eigenmatrix Q with PQ = QP = vI, when P is invertible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<Eigenmatrix>,
    pub checks: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDualSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<SelfDuality>,
    /// For each relation N_i, the label of the eigenspace spanned by
    /// {χ_a : a ∈ N_i}, if there is one.
    pub element_to_character: Vec<Option<String>>,
    pub checks: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub element: usize,
    pub label: String,
}

/// Everything one run produced. Contains no timings, so equal requests give
/// byte-identical serializations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub family: Family,
    pub q: u64,
    pub vertices: usize,
    /// Classes including the identity relation.
    pub classes: usize,
    pub class_labels: Vec<String>,
    pub valencies: Vec<i64>,
    pub symmetric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<PhiEntry>>,
    pub sections: Vec<Section>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen: Option<EigenSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selfdual: Option<SelfDualSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difference_set: Option<DifferenceSetReport>,
    pub passed: bool,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = (&str, &Clause)> {
        let sections = self.sections.iter().map(|s| (s.name.as_str(), &s.report));
        let eigen = self.eigen.iter().map(|e| ("eigen", &e.checks));
        let dual = self.selfdual.iter().map(|d| ("selfdual", &d.checks));
        sections.chain(eigen).chain(dual).flat_map(|(n, r)| r.failures().map(move |c| (n, c)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

enum Built {
    Twin(TwinContext),
    Gdd(GddContext),
    Intro,
}

fn phi_table(phi: &Bijection) -> Vec<PhiEntry> {
    phi.images().iter().enumerate().map(|(element, l)| PhiEntry { element, label: l.to_string() }).collect()
}

/// Checks that `q` suits the family before any work, so invalid input is
/// reported the same way regardless of what was requested.
pub fn validate(family: Family, q: u64) -> Result<()> {
    let need = |n: u64| is_prime_power(n).map(|_| ()).ok_or(Error::NotPrimePower(n));
    match family {
        Family::Twin => {
            if q < 2 {
                return Err(Error::InvalidParameter(format!("q = {q} must be at least 2")));
            }
            need(q)?;
            need(q + 2)
        }
        Family::Gdd => {
            if q < 2 {
                return Err(Error::InvalidParameter(format!("q = {q} must be at least 2")));
            }
            need(q)?;
            need(q + 1)
        }
        Family::Intro => {
            if q.is_multiple_of(2) {
                return Err(Error::EvenOrder(q));
            }
            need(q)?;
            need(q + 2)
        }
    }
}

/// Runs the requested pipeline. Verification failures are recorded in the
/// report; only invalid input or internal inconsistencies return `Err`.
pub fn run_request(req: &RunRequest) -> Result<RunReport> {
    validate(req.family, req.q)?;
    let (built, scheme, t, phi) = match req.family {
        Family::Twin => {
            let ctx = twin::make_twin_context(req.q, req.phi.clone())?;
            let (s, t) = twin::build_twin_scheme(&ctx)?;
            let phi = Some(phi_table(ctx.phi()));
            (Built::Twin(ctx), s, t, phi)
        }
        Family::Gdd => {
            let ctx = gdd::make_gdd_context(req.q, req.phi.clone())?;
            let (s, t) = gdd::build_gdd_scheme(&ctx)?;
            let phi = Some(phi_table(ctx.phi()));
            (Built::Gdd(ctx), s, t, phi)
        }
        Family::Intro => {
            if req.phi.is_some() {
                return Err(Error::InvalidParameter("the intro family takes no bijection".into()));
            }
            let t = intro::build_intro_relations(req.q)?;
            (Built::Intro, t.scheme()?, t, None)
        }
    };

    let mut sections = Vec::new();
    let mut difference_set = None;
    if req.verify.axioms {
        let mut r = verify_axioms(&scheme)?.clauses;
        r.push(check_translation_invariance(&scheme, &t));
        sections.push(Section { name: "axioms".into(), report: r });
    }
    if req.verify.designs {
        let r = match &built {
            Built::Twin(ctx) => {
                let q = ctx.q() as i64;
                let clauses = ctx
                    .spec_r()
                    .nonzero()
                    .map(|b| {
                        let n = ctx.incidence_n(b)?;
                        symmetric_design_clause(
                            &format!("symmetric design beta={b}"),
                            &n,
                            ctx.vertex_count(),
                            q * (q + 1),
                            q,
                        )
                    })
                    .collect::<Result<_>>()?;
                CheckReport::new(clauses)
            }
            Built::Gdd(ctx) => gdd::check_corollary(ctx)?,
            Built::Intro => {
                let d = intro::verify_difference_set(&intro::intro_difference_subset(&t), &t)?;
                let (v, k, l) = intro::expected_difference_parameters(req.q);
                let ok = d.verified && (d.v, d.k, d.lambda) == (v, k, Some(l));
                let clause = Clause::from_bool(
                    "difference set",
                    ok,
                    format!("expected ({v}, {k}, {l}), found ({}, {}, {:?})", d.v, d.k, d.lambda),
                );
                difference_set = Some(d);
                CheckReport::new(vec![clause])
            }
        };
        sections.push(Section { name: "designs".into(), report: r });
    }
    if req.verify.props {
        match &built {
            Built::Twin(ctx) => sections.push(Section { name: "props".into(), report: twin::check_prop31(ctx)? }),
            Built::Gdd(ctx) => sections.push(Section { name: "props".into(), report: gdd::check_prop41(ctx)? }),
            Built::Intro => {}
        }
    }

    let need_chars = req.eigen || req.selfdual;
    let chars = if need_chars { Some(eigenmatrix_from_characters(&t)?) } else { None };
    let theory = match &built {
        Built::Twin(ctx) if need_chars => Some(twin::theoretical_eigenmatrix_twin(ctx)?),
        Built::Gdd(ctx) if need_chars => Some(gdd::theoretical_eigenmatrix_gdd(ctx)?),
        _ => None,
    };
    let mut first = None;
    let mut ce_row_labels = Vec::new();
    if let Some(ce) = &chars {
        let p = match &built {
            Built::Twin(ctx) => ce.labeled(&t, |c| twin::twin_character_label(ctx, c))?,
            Built::Gdd(ctx) => ce.labeled(&t, |c| gdd::gdd_character_label(ctx, c))?,
            Built::Intro => ce.eigenmatrix.clone(),
        };
        ce_row_labels = p.row_labels.clone();
        // present rows in the closed form's order when there is one
        first = Some(match &theory {
            Some(th) if p.size() == th.size() && p.row_labels.iter().all(|l| th.row_index(l).is_some()) => {
                p.reordered(&th.row_labels, &p.col_labels)?
            }
            _ => p,
        });
    }
    let second = first.as_ref().map(|p| second_eigenmatrix(p, scheme.vertex_count()));

    let eigen = match (&first, &chars) {
        (Some(p), Some(ce)) if req.eigen => Some(eigen_section(req, theory.as_ref(), &scheme, &t, ce, p, &second)?),
        _ => None,
    };
    let selfdual = match (&first, &chars) {
        (Some(p), Some(ce)) if req.selfdual => Some(selfdual_section(&t, ce, &ce_row_labels, p, &second)),
        _ => None,
    };

    let mut report = RunReport {
        family: req.family,
        q: req.q,
        vertices: scheme.vertex_count(),
        classes: scheme.len(),
        class_labels: scheme.labels(),
        valencies: scheme.valencies(),
        symmetric: is_symmetric_scheme(&scheme),
        phi,
        sections,
        eigen,
        selfdual,
        difference_set,
        passed: true,
    };
    let passed = report.failures().next().is_none();
    report.passed = passed;
    Ok(report)
}

fn eigen_section(
    req: &RunRequest,
    theory: Option<&Eigenmatrix>,
    scheme: &SchemeInstance,
    t: &TranslationData,
    ce: &CharacterEigen,
    p: &Eigenmatrix,
    second: &Option<Result<Eigenmatrix>>,
) -> Result<EigenSection> {
    let v = scheme.vertex_count();
    let mut checks = CheckReport::default();
    if let Some(th) = theory {
        let diff = p.difference_by_label(th);
        checks.push(Clause::from_bool("closed form", diff.is_none(), diff.unwrap_or_default()));
    }
    let sum = p.multiplicities.iter().sum::<i64>();
    checks.push(Clause::from_bool(
        "multiplicities sum",
        sum == v as i64,
        format!("multiplicities sum to {sum}, not {v}"),
    ));
    checks.push(multiplicities_check(p, v)?);
    let second_out = match second {
        Some(Ok(q)) => {
            checks.push(Clause::pass("PQ = vI"));
            Some(q.clone())
        }
        Some(Err(e)) => {
            checks.push(Clause::fail("PQ = vI", None, e.to_string()));
            None
        }
        None => None,
    };
    if req.q <= EIGENVECTOR_CHECK_MAX_Q {
        checks.push(verify_eigenvectors(scheme, t, ce)?);
    }
    Ok(EigenSection { first: p.clone(), second: second_out, checks })
}

fn selfdual_section(
    t: &TranslationData,
    ce: &CharacterEigen,
    ce_row_labels: &[String],
    p: &Eigenmatrix,
    second: &Option<Result<Eigenmatrix>>,
) -> SelfDualSection {
    let element_to_character =
        check_translation_duality(t, ce).into_iter().map(|m| m.map(|i| ce_row_labels[i].clone())).collect();
    let (witness, clause) = match second {
        Some(Ok(q)) => {
            let w = check_self_dual(p, q);
            let c = Clause::from_bool("self-dual", w.is_some(), "no pairing with P = conj(Q) exists");
            (w, c)
        }
        Some(Err(e)) => (None, Clause::fail("self-dual", None, e.to_string())),
        None => (None, Clause::fail("self-dual", None, "no eigenmatrix")),
    };
    SelfDualSection { witness, element_to_character, checks: CheckReport::new(vec![clause]) }
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: u64,
    pub vertices: usize,
    pub classes: usize,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

/// Sweep rows ordered by q, plus per-q wall-clock milliseconds kept apart
/// from the rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub family: Family,
    pub max_q: u64,
    pub rows: Vec<SweepRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<u64>>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

/// Full verification of every valid q ≤ `max_q`.
pub fn sweep(family: Family, max_q: u64) -> Result<SweepSummary> {
    use rayon::prelude::*;
    let results: Vec<(SweepRow, u64)> = family
        .valid_orders(max_q)
        .into_par_iter()
        .map(|q| -> Result<(SweepRow, u64)> {
            let start = std::time::Instant::now();
            let r = run_request(&RunRequest::full(family, q))?;
            let failures = r.failures().map(|(s, c)| format!("{s}: {}", c.name)).collect();
            let row = SweepRow { q, vertices: r.vertices, classes: r.classes, passed: r.passed, failures };
            Ok((row, start.elapsed().as_millis() as u64))
        })
        .collect::<Result<_>>()?;
    let (rows, times): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(SweepSummary { family, max_q, rows, timings_ms: Some(times) })
}
