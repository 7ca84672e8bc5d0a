//! Permutations restricted by underlined patterns, the eigensequence for
//! composition of power series, and the bijections connecting them.
//!
//! The central objects are the permutations in which every `3241` pattern is
//! part of a `35241` pattern ("3(5)241-OK" permutations). They are counted by
//! the shifted eigensequence of composition, and [`bijection`] makes that
//! explicit. [`four_patterns`] classifies all 96 underlined patterns of length
//! four by counting sequence.

#![allow(clippy::needless_range_loop)]

pub mod bijection;
pub mod cli;
pub mod error;
pub mod four_patterns;
pub mod perm;
pub mod recurrences;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use perm::{Permutation, UnderlinedPattern};
