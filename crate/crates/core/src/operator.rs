use serde::{Deserialize, Serialize};

use crate::classification::PeriodicClassification;
use crate::diagonal::classify_diagonal;
use crate::permutation::{classify_permutation, PermutationSpec};
use crate::spectrum::SpectrumSpec;

/// A diagonal or permutation operator, as written in spec files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "spec", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Diagonal(SpectrumSpec),
    Permutation(PermutationSpec),
}

impl OperatorSpec {
    pub fn classify(&self) -> PeriodicClassification {
        match self {
            OperatorSpec::Diagonal(s) => classify_diagonal(s),
            OperatorSpec::Permutation(p) => classify_permutation(p),
        }
    }

    /// The operator's adjoint, which has the same periodic points.
    pub fn adjoint(&self) -> OperatorSpec {
        match self {
            OperatorSpec::Diagonal(s) => OperatorSpec::Diagonal(s.adjoint()),
            OperatorSpec::Permutation(p) => OperatorSpec::Permutation(p.inverse()),
        }
    }
}
