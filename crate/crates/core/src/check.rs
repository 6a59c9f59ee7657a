//! Pass/fail records for exact identity checks.

use serde::{Deserialize, Serialize};

use crate::int_linalg::IntMatrix;

/// A coordinate where a checked identity breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Which instance of the clause failed, e.g. `"beta=2"`.
    pub context: String,
    pub row: usize,
    pub col: usize,
    pub expected: i64,
    pub found: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Clause {
    pub fn pass(name: impl Into<String>) -> Self {
        Self { name: name.into(), passed: true, witness: None, note: None }
    }

    pub fn fail(name: impl Into<String>, witness: Option<Witness>, note: impl Into<String>) -> Self {
        Self { name: name.into(), passed: false, witness, note: Some(note.into()) }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, note: impl Into<String>) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, None, note)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Compares `found` against `expected`, returning a witness at the first
/// differing coordinate.
pub fn matrix_witness(context: &str, found: &IntMatrix, expected: &IntMatrix) -> Option<Witness> {
    let (row, col) = found.first_difference(expected)?;
    let at = |m: &IntMatrix| if row < m.rows() && col < m.cols() { m.get(row, col) } else { 0 };
    Some(Witness { context: context.to_string(), row, col, expected: at(expected), found: at(found) })
}

/// Accumulates the first failure of a clause that is checked over many
/// instances (for example, every β).
#[derive(Debug)]
pub struct ClauseBuilder {
    name: String,
    witness: Option<Witness>,
    failed: bool,
    note: Option<String>,
    count: usize,
}

impl ClauseBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), witness: None, failed: false, note: None, count: 0 }
    }

    /// Records one matrix identity instance.
    pub fn expect_eq(&mut self, context: &str, found: &IntMatrix, expected: &IntMatrix) -> &mut Self {
        self.count += 1;
        if !self.failed {
            if let Some(w) = matrix_witness(context, found, expected) {
                self.failed = true;
                self.note = Some(format!("identity fails for {context}"));
                self.witness = Some(w);
            }
        }
        self
    }

    /// Records one boolean instance.
    pub fn expect(&mut self, ok: bool, context: impl FnOnce() -> String) -> &mut Self {
        self.count += 1;
        if !ok && !self.failed {
            self.failed = true;
            self.note = Some(context());
        }
        self
    }

    pub fn fail_with(&mut self, witness: Witness, note: String) -> &mut Self {
        if !self.failed {
            self.failed = true;
            self.witness = Some(witness);
            self.note = Some(note);
        }
        self
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn finish(self) -> Clause {
        Clause {
            name: self.name,
            passed: !self.failed,
            witness: self.witness,
            note: self.note.or_else(|| Some(format!("{} instances checked", self.count))),
        }
    }
}

/// An ordered list of clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub clauses: Vec<Clause>,
}

impl CheckReport {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Self { clauses }
    }

    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn push(&mut self, c: Clause) {
        self.clauses.push(c);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.clauses.extend(other.clauses);
    }
}
