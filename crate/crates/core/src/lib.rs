//! Primeness of group-graded rings at desk scale.

pub mod constructions;
pub mod corpus;
pub mod error;
pub mod graded;
pub mod groups;
pub mod json;
pub mod lpa;
pub mod primality;
pub mod ring;
pub mod zmod;

pub use error::{Caps, Error, Result};
pub use graded::{
    CorrespondenceReport, Degree, GradeGroup, GradedRing, GradingFlags, Invariance, NormalSpec,
    Pair,
};
pub use groups::{FiniteGroup, GroupPredicates, Subgroup, SymbolicGroup};
pub use primality::{
    decide_prime, is_prime_graded, main_theorem_harness, search_np_datum, verify_np_datum, Flavor,
    HarnessReport, Method, NpDatum, NpFailure, PrimenessReport, SearchBounds, Strategy,
};
pub use ring::{FiniteRing, Side, Verdict};
pub use zmod::{Submodule, Zn};
