//! Generic association-scheme machinery: axioms, design equations,
//! translation schemes over products of finite fields, and exact
//! eigenmatrices.

mod axioms;
mod designs;
mod eigen;
mod selfdual;
mod translation;

pub use axioms::{is_symmetric_scheme, verify_axioms, AxiomReport, IntersectionTensor};
pub use designs::{sgdd_clause, symmetric_design_clause, verify_sgdd, verify_symmetric_design};
pub use eigen::{
    eigenmatrix_from_characters, multiplicities_check, second_eigenmatrix, verify_eigenvectors, CharacterEigen,
    Eigenmatrix,
};
pub use selfdual::{check_self_dual, check_translation_duality, verify_pairing, SelfDuality};
pub(crate) use translation::encode;
pub use translation::{check_translation_invariance, ensure_matches_relations, Relation, TranslationData};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int_linalg::IntMatrix;

/// A labelled adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class {
    pub label: String,
    pub matrix: IntMatrix,
}

/// A candidate association scheme: a vertex count and an ordered list of
/// labelled 0/1 matrices, the identity class first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeInstance {
    vertex_count: usize,
    classes: Vec<Class>,
}

impl SchemeInstance {
    pub fn new(classes: Vec<(String, IntMatrix)>) -> Result<Self> {
        let v = classes.first().map_or(0, |(_, m)| m.rows());
        let mut seen = std::collections::HashSet::new();
        for (label, m) in &classes {
            if m.shape() != (v, v) {
                return Err(Error::ShapeMismatch { op: "scheme class", left: (v, v), right: m.shape() });
            }
            if !m.is_zero_one() {
                return Err(Error::InvalidParameter(format!("class {label} is not a 0/1 matrix")));
            }
            if !seen.insert(label.clone()) {
                return Err(Error::InvalidParameter(format!("duplicate class label {label}")));
            }
        }
        Ok(Self {
            vertex_count: v,
            classes: classes.into_iter().map(|(label, matrix)| Class { label, matrix }).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of classes including the identity class.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn matrix(&self, i: usize) -> &IntMatrix {
        &self.classes[i].matrix
    }

    pub fn labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Row sums of the first row of each class.
    pub fn valencies(&self) -> Vec<i64> {
        self.classes.iter().map(|c| if self.vertex_count == 0 { 0 } else { c.matrix.row(0).iter().sum() }).collect()
    }

    /// Copy with one class matrix replaced (for fault injection).
    pub fn with_matrix(&self, i: usize, m: IntMatrix) -> Self {
        let mut out = self.clone();
        out.classes[i].matrix = m;
        out
    }
}
