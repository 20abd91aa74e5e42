pub mod approximation;
pub mod classification;
pub mod diagonal;
pub mod error;
pub mod number;
pub mod operator;
pub mod oracle;
pub mod permutation;
pub mod sampling;
pub mod spectrum;
pub mod unit_scalar;
pub mod vector;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../book/src/unit_scalars.md")]
    struct UnitScalars;
    #[doc = include_str!("../../../book/src/diagonal.md")]
    struct Diagonal;
    #[doc = include_str!("../../../book/src/permutations.md")]
    struct Permutations;
    #[doc = include_str!("../../../book/src/approximation.md")]
    struct Approximation;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}

pub use classification::{PeriodicClassification, PeriodicKind, Rule};
pub use error::{Error, Result};
pub use number::Cardinal;
pub use permutation::{GroupedVector, PermutationSpec};
pub use spectrum::{BaseFamily, SpectrumSpec};
pub use unit_scalar::UnitScalar;
pub use vector::{ExactComplex, ExactVector, VectorSpec};
