//! Permutations as words of distinct positive integers.

mod enumerate;
mod factor;
mod pattern;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use enumerate::{for_each_permutation, par_count, Permutations};
pub use factor::{lit_entries, lrmax_factorize, Factor, LrMaxFactorization};
pub use pattern::check_census_limit;
pub use pattern::{
    census, census_with_limit, fast_35241ok, for_each_occurrence, is_avoider, occurrences,
    satisfies, word_avoids, word_is_35241ok, UnderlinedPattern, DEFAULT_CENSUS_LIMIT,
};
pub(crate) use pattern::{word_satisfies, Extension};

/// A word of pairwise distinct positive integers.
///
/// Most operations expect a *standard* permutation, one whose entries are
/// exactly `1..=n`. Words on arbitrary values show up as factors and are
/// brought back to standard form with [`reduce`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates distinctness and positivity.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::invalid("permutation entries must be positive"));
        }
        let mut sorted = entries.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "duplicate entries in {}",
                Permutation(entries)
            )));
        }
        Ok(Permutation(entries))
    }

    /// Builds a permutation without validation. Callers guarantee the
    /// entries are distinct and positive.
    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        Permutation(entries)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff the entries are exactly `1..=n`.
    pub fn is_standard(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n];
        for &e in &self.0 {
            let e = e as usize;
            if e == 0 || e > n || seen[e - 1] {
                return false;
            }
            seen[e - 1] = true;
        }
        true
    }

    pub fn max_entry(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }

    pub fn position_of(&self, value: u32) -> Option<usize> {
        self.0.iter().position(|&e| e == value)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e as usize == i + 1)
    }

    fn require_standard(&self) -> Result<()> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{} is not a standard permutation",
                self
            )))
        }
    }

    /// Entrywise `n + 1 - e`.
    pub fn complement(&self) -> Result<Self> {
        self.require_standard()?;
        let n = self.0.len() as u32;
        Ok(Permutation(self.0.iter().map(|&e| n + 1 - e).collect()))
    }

    pub fn reverse(&self) -> Result<Self> {
        self.require_standard()?;
        Ok(Permutation(self.0.iter().rev().copied().collect()))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_standard()?;
        let mut inv = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            inv[e as usize - 1] = i as u32 + 1;
        }
        Ok(Permutation(inv))
    }

    /// Applies the generators in `word` left to right.
    pub fn apply_symmetry(&self, word: &[Symmetry]) -> Result<Self> {
        self.require_standard()?;
        let mut p = self.clone();
        for g in word {
            p = match g {
                Symmetry::Complement => p.complement()?,
                Symmetry::Reverse => p.reverse()?,
                Symmetry::Inverse => p.inverse()?,
            };
        }
        Ok(p)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        write_entries(f, &self.0)
    }
}

pub(crate) fn write_entries(f: &mut fmt::Formatter<'_>, entries: &[u32]) -> fmt::Result {
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{}", e)?;
    }
    Ok(())
}

impl FromStr for Permutation {
    type Err = Error;

    /// Space-separated decimal entries; `()` or an empty string is the empty
    /// permutation.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Permutation::empty());
        }
        let entries = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| Error::invalid(format!("malformed permutation entry {:?}", tok)))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(entries)
    }
}

/// Generators of the symmetry group acting on permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Complement,
    Reverse,
    Inverse,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] = [Symmetry::Complement, Symmetry::Reverse, Symmetry::Inverse];
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complement" | "c" => Ok(Symmetry::Complement),
            "reverse" | "r" => Ok(Symmetry::Reverse),
            "inverse" | "i" => Ok(Symmetry::Inverse),
            other => Err(Error::invalid(format!("unknown symmetry {:?}", other))),
        }
    }
}

/// Rank-relabels a word of distinct values onto `1..=n`.
pub fn reduce(word: &[u32]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_unstable_by_key(|&i| word[i]);
    if order.windows(2).any(|w| word[w[0]] == word[w[1]]) {
        return Err(Error::invalid(
            "cannot reduce a word with duplicate entries",
        ));
    }
    Ok(Permutation(reduce_sorted(word, &order)))
}

/// Reduction for words already known to be duplicate-free.
pub(crate) fn reduce_unchecked(word: &[u32]) -> Permutation {
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_unstable_by_key(|&i| word[i]);
    Permutation(reduce_sorted(word, &order))
}

fn reduce_sorted(word: &[u32], order: &[usize]) -> Vec<u32> {
    let mut out = vec![0; word.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    out
}
