use std::collections::BTreeSet;

use super::Permutation;

/// One left-to-right maximum together with the entries following it up to
/// the next left-to-right maximum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub max: u32,
    pub tail: Vec<u32>,
}

impl Factor {
    pub fn len(&self) -> usize {
        1 + self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::once(self.max).chain(self.tail.iter().copied())
    }
}

/// `m1 L1 m2 L2 ... mr Lr` with `m1 < m2 < ... < mr` the left-to-right maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrMaxFactorization {
    pub factors: Vec<Factor>,
    /// Index of the first factor whose head is a LIT entry; equals
    /// `factors.len()` only for the empty permutation.
    pub lit_start: usize,
}

impl LrMaxFactorization {
    pub fn lit_entries(&self) -> Vec<u32> {
        self.factors[self.lit_start..]
            .iter()
            .map(|f| f.max)
            .collect()
    }

    pub fn lit_set(&self) -> BTreeSet<u32> {
        self.lit_entries().into_iter().collect()
    }

    pub fn maxima(&self) -> Vec<u32> {
        self.factors.iter().map(|f| f.max).collect()
    }

    /// Start position of every factor.
    pub fn starts(&self) -> Vec<usize> {
        let mut pos = 0;
        self.factors
            .iter()
            .map(|f| {
                let s = pos;
                pos += f.len();
                s
            })
            .collect()
    }

    pub fn concat(&self) -> Vec<u32> {
        self.factors.iter().flat_map(|f| f.entries()).collect()
    }
}

/// Splits a word at its left-to-right maxima and locates the LIT entries.
pub fn lrmax_factorize(p: &Permutation) -> LrMaxFactorization {
    let word = p.entries();
    let mut factors: Vec<Factor> = Vec::new();
    for &e in word {
        match factors.last_mut() {
            Some(f) if e < f.max => f.tail.push(e),
            _ => factors.push(Factor {
                max: e,
                tail: Vec::new(),
            }),
        }
    }
    let lit_count = lit_entries(word).len();
    let lit_start = factors.len() - lit_count;
    LrMaxFactorization { factors, lit_start }
}

/// The longest run of largest values `v_k < ... < v_n` (consecutive in rank)
/// that appear left to right, in increasing order.
pub fn lit_entries(word: &[u32]) -> Vec<u32> {
    if word.is_empty() {
        return Vec::new();
    }
    let mut by_value: Vec<(u32, usize)> = word.iter().copied().zip(0..).collect();
    by_value.sort_unstable();
    let mut run = 1;
    while run < by_value.len() {
        let (_, hi_pos) = by_value[by_value.len() - run];
        let (_, lo_pos) = by_value[by_value.len() - run - 1];
        if lo_pos > hi_pos {
            break;
        }
        run += 1;
    }
    by_value[by_value.len() - run..]
        .iter()
        .map(|&(v, _)| v)
        .collect()
}
