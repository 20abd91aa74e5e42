use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::number::Cardinal;

/// Shape of the periodic-point subspace `P(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicKind {
    /// `P(T) = {0}`.
    ZeroOnly,
    /// Closed, nonzero and not everything.
    ClosedProper,
    /// Neither closed nor dense.
    ProperNonClosed,
    /// Dense but not closed.
    ProperDense,
    WholeSpace,
}

/// Which structural fact decided the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    NoRootOfUnityEigenvalue,
    BoundedEigenvalueOrders,
    UnboundedEigenvalueOrders,
    FinitelyManyRootValues,
    InfinitelyManyRootValues,
    BoundedFiniteOrbits,
    UnboundedFiniteOrbits,
    MixedOrbitsBounded,
    MixedOrbitsUnbounded,
    NoFiniteOrbit,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::NoRootOfUnityEigenvalue => {
                "no eigenvalue is a root of unity, so 0 is the only periodic point"
            }
            Rule::BoundedEigenvalueOrders => {
                "every eigenvalue is a root of unity with bounded order, so T^N = I for N the lcm of the orders"
            }
            Rule::UnboundedEigenvalueOrders => {
                "every eigenvalue is a root of unity but the orders are unbounded, so P(T) is dense and not closed"
            }
            Rule::FinitelyManyRootValues => {
                "finitely many distinct eigenvalues are roots of unity, so P(T) = ker(T^k - I) for k the lcm of their orders"
            }
            Rule::InfinitelyManyRootValues => {
                "infinitely many distinct eigenvalues are roots of unity, so P(T) is not closed"
            }
            Rule::BoundedFiniteOrbits => {
                "every orbit is finite with bounded size, so T^M = I for M the lcm of the orbit sizes"
            }
            Rule::UnboundedFiniteOrbits => {
                "every orbit is finite but the sizes are unbounded, so P(T) is dense and not closed"
            }
            Rule::MixedOrbitsBounded => {
                "some orbit is infinite and the finite orbit sizes are bounded, so P(T) = ker(T^M - I)"
            }
            Rule::MixedOrbitsUnbounded => {
                "some orbit is infinite and the finite orbit sizes are unbounded, so P(T) is not closed"
            }
            Rule::NoFiniteOrbit => "every orbit is infinite, so 0 is the only periodic point",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicClassification {
    pub kind: PeriodicKind,
    /// Least `N` with `T^N = I`; only for [`PeriodicKind::WholeSpace`].
    #[serde(with = "crate::number::opt_big_uint")]
    pub exponent: Option<BigUint>,
    pub closed: bool,
    pub dense: bool,
    pub closure_codimension: Cardinal,
    /// `k` with `P(T) = ker(T^k − I)`, when `P(T)` is closed and nonzero.
    #[serde(with = "crate::number::opt_big_uint")]
    pub kernel_exponent: Option<BigUint>,
    pub rule: Rule,
}

impl PeriodicClassification {
    pub fn zero_only(codimension: Cardinal, rule: Rule) -> Self {
        PeriodicClassification {
            kind: PeriodicKind::ZeroOnly,
            exponent: None,
            closed: true,
            dense: false,
            closure_codimension: codimension,
            kernel_exponent: None,
            rule,
        }
    }

    pub fn whole_space(exponent: BigUint, rule: Rule) -> Self {
        PeriodicClassification {
            kind: PeriodicKind::WholeSpace,
            exponent: Some(exponent.clone()),
            closed: true,
            dense: true,
            closure_codimension: Cardinal::zero(),
            kernel_exponent: Some(exponent),
            rule,
        }
    }

    pub fn proper_dense(rule: Rule) -> Self {
        PeriodicClassification {
            kind: PeriodicKind::ProperDense,
            exponent: None,
            closed: false,
            dense: true,
            closure_codimension: Cardinal::zero(),
            kernel_exponent: None,
            rule,
        }
    }

    pub fn closed_proper(kernel_exponent: BigUint, codimension: Cardinal, rule: Rule) -> Self {
        PeriodicClassification {
            kind: PeriodicKind::ClosedProper,
            exponent: None,
            closed: true,
            dense: false,
            closure_codimension: codimension,
            kernel_exponent: Some(kernel_exponent),
            rule,
        }
    }

    pub fn proper_non_closed(codimension: Cardinal, rule: Rule) -> Self {
        PeriodicClassification {
            kind: PeriodicKind::ProperNonClosed,
            exponent: None,
            closed: false,
            dense: false,
            closure_codimension: codimension,
            kernel_exponent: None,
            rule,
        }
    }

    /// The structural invariants every record must satisfy.
    pub fn is_consistent(&self) -> bool {
        let codim_zero = self.closure_codimension.is_zero();
        match self.kind {
            PeriodicKind::WholeSpace => self.closed && self.dense && codim_zero && self.exponent.is_some(),
            PeriodicKind::ZeroOnly => self.closed && !self.dense && !codim_zero && self.kernel_exponent.is_none(),
            PeriodicKind::ProperDense => !self.closed && self.dense && codim_zero,
            PeriodicKind::ClosedProper => self.closed && !self.dense && !codim_zero && self.kernel_exponent.is_some(),
            PeriodicKind::ProperNonClosed => !self.closed && !self.dense && !codim_zero,
        }
    }
}

impl fmt::Display for PeriodicClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            PeriodicKind::ZeroOnly => "zero only",
            PeriodicKind::ClosedProper => "closed proper subspace",
            PeriodicKind::ProperNonClosed => "proper, neither closed nor dense",
            PeriodicKind::ProperDense => "proper dense subspace",
            PeriodicKind::WholeSpace => "whole space",
        };
        write!(f, "P(T): {kind}")?;
        if let Some(n) = &self.exponent {
            write!(f, ", exponent {n}")?;
        }
        if let Some(k) = &self.kernel_exponent {
            write!(f, ", P(T) = ker(T^{k} - I)")?;
        }
        write!(f, ", closure codimension {}", self.closure_codimension)
    }
}
