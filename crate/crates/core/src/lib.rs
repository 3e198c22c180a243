//! Permutation and involution matchings on finite regular semigroups.
//!
//! A *matching* of a semigroup `S` is a bijection `φ: S → S` with `φ(a)` an
//! inverse of `a` for every `a`. This crate decides whether one exists,
//! produces certificates either way, and covers the 0-rectangular band,
//! colour alignment and transformation monoid constructions built around
//! that question.

pub mod band;
pub mod colour;
pub mod corpus;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod search;
pub mod semigroup;
pub mod transform;

pub use band::{builtin_b7, ZeroRectBand};
pub use matching::{
    equivalence_report, find_involution_matching, find_permutation_matching, hall_violator, InverseGraph,
    InvolutionMatching, PermutationMatching,
};
pub use semigroup::{FiniteSemigroup, SemigroupError};
