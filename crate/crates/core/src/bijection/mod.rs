//! The bijection from 3(5)241-OK permutations of length `n` to pairs
//! `(rho, v)` with `rho` OK of length `k - 1` and `v` a `k`-list of OK
//! permutations of total length `n - k`.
//!
//! The chain is: split at the maximum ([`star_encode`]), collapse runs of
//! stars into marks plus a bit sequence ([`collapse_stars`]), sort the tails
//! between left-to-right maxima ([`sort_reduce`]) and finally distribute the
//! left-to-right-maximum factors over `k` rows with a moving window
//! ([`window_forward`]). Every stage has an exact inverse.

mod eigen;
mod split;
mod stars;
mod window;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{lit_entries, Permutation};

pub use eigen::{eigen_forward, eigen_inverse, EigenPair};
pub use split::{split_condition_holds, star_decode, star_encode};
pub use stars::{collapse_stars, expand_stars};
pub use window::{
    ok_forward, ok_inverse, restore_tails, sort_reduce, window_forward, window_inverse,
    window_trace, TailRecord, WindowTrace,
};

/// A permutation with some of its non-maximal LIT entries marked.
///
/// With `k - 1` marks this is an element of `X_{n,k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPermutation {
    base: Permutation,
    marks: BTreeSet<u32>,
}

impl MarkedPermutation {
    pub fn new(base: Permutation, marks: BTreeSet<u32>) -> Result<Self> {
        let lit = lit_entries(base.entries());
        let max = base.max_entry();
        for &m in &marks {
            if Some(m) == max || !lit.contains(&m) {
                return Err(Error::invalid(format!(
                    "{} is not a non-maximal LIT entry of {}",
                    m, base
                )));
            }
        }
        Ok(MarkedPermutation { base, marks })
    }

    pub fn unmarked(base: Permutation) -> Self {
        MarkedPermutation {
            base,
            marks: BTreeSet::new(),
        }
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn marks(&self) -> &BTreeSet<u32> {
        &self.marks
    }

    /// One more than the number of marks.
    pub fn k(&self) -> usize {
        self.marks.len() + 1
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }
}

impl fmt::Display for MarkedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.is_empty() {
            return f.write_str("()");
        }
        for (i, e) in self.base.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", e)?;
            if self.marks.contains(e) {
                f.write_str("^")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MarkedPermutation {
    type Err = Error;

    /// Entries separated by spaces, marked ones suffixed with `^`.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut marks = BTreeSet::new();
        let s = s.trim();
        if !(s.is_empty() || s == "()") {
            for tok in s.split_whitespace() {
                let (num, marked) = match tok.strip_suffix('^') {
                    Some(num) => (num, true),
                    None => (tok, false),
                };
                let v: u32 = num
                    .parse()
                    .map_err(|_| Error::invalid(format!("malformed entry {:?}", tok)))?;
                if marked {
                    marks.insert(v);
                }
                entries.push(v);
            }
        }
        MarkedPermutation::new(Permutation::new(entries)?, marks)
    }
}

/// A permutation with stars placed immediately before LIT entries or
/// immediately after the maximum. Several stars may share a location.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarredPermutation {
    base: Permutation,
    /// Star count in front of each LIT entry (absent means zero).
    before: BTreeMap<u32, usize>,
    after_max: usize,
}

impl StarredPermutation {
    pub fn new(base: Permutation, before: BTreeMap<u32, usize>, after_max: usize) -> Result<Self> {
        let lit = lit_entries(base.entries());
        for (&e, &count) in &before {
            if count > 0 && !lit.contains(&e) {
                return Err(Error::invalid(format!(
                    "star before {} but it is not a LIT entry of {}",
                    e, base
                )));
            }
        }
        let before = before.into_iter().filter(|&(_, c)| c > 0).collect();
        Ok(StarredPermutation {
            base,
            before,
            after_max,
        })
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn stars_before(&self, entry: u32) -> usize {
        self.before.get(&entry).copied().unwrap_or(0)
    }

    pub fn stars_after_max(&self) -> usize {
        self.after_max
    }

    pub fn star_count(&self) -> usize {
        self.before.values().sum::<usize>() + self.after_max
    }
}

impl fmt::Display for StarredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.base.max_entry();
        let mut tokens: Vec<String> = Vec::new();
        for &e in self.base.entries() {
            tokens.extend(std::iter::repeat_n("*".to_string(), self.stars_before(e)));
            tokens.push(e.to_string());
            if Some(e) == max {
                tokens.extend(std::iter::repeat_n("*".to_string(), self.after_max));
            }
        }
        if self.base.is_empty() {
            tokens.extend(std::iter::repeat_n("*".to_string(), self.after_max));
        }
        if tokens.is_empty() {
            return f.write_str("()");
        }
        f.write_str(&tokens.join(" "))
    }
}

impl FromStr for StarredPermutation {
    type Err = Error;

    /// Entries and `*` tokens separated by spaces. A run of stars right after
    /// the maximum sits after it; any other run attaches to the next entry.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return StarredPermutation::new(Permutation::empty(), BTreeMap::new(), 0);
        }
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let entries = tokens
            .iter()
            .filter(|t| **t != "*")
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::invalid(format!("malformed token {:?}", t)))
            })
            .collect::<Result<Vec<_>>>()?;
        let base = Permutation::new(entries)?;
        let max = base.max_entry();
        let mut before = BTreeMap::new();
        let mut after_max = 0;
        let mut pending = 0;
        let mut prev: Option<u32> = None;
        for t in tokens {
            if t == "*" {
                pending += 1;
                continue;
            }
            let v: u32 = t.parse().expect("validated above");
            if pending > 0 {
                if prev.is_some() && prev == max {
                    after_max = pending;
                } else {
                    before.insert(v, pending);
                }
            }
            pending = 0;
            prev = Some(v);
        }
        if pending > 0 {
            if prev == max {
                after_max = pending;
            } else {
                return Err(Error::invalid(
                    "trailing stars must follow the maximum directly",
                ));
            }
        }
        StarredPermutation::new(base, before, after_max)
    }
}

/// A list of permutations, written with ` / ` between items.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PermList(pub Vec<Permutation>);

impl PermList {
    pub fn items(&self) -> &[Permutation] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_len(&self) -> usize {
        self.0.iter().map(Permutation::len).sum()
    }
}

impl fmt::Display for PermList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&items.join(" / "))
    }
}

impl FromStr for PermList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::invalid("empty list"));
        }
        s.split('/')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(PermList)
    }
}
