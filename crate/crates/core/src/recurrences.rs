//! Counting recurrences for 3(5)241-OK permutations.
//!
//! Two independent routes: a triple recurrence over first entries and
//! ascent-start permutations, and a sum over integer compositions weighted by
//! dominance counts. Dropping the dominance weight yields the Catalan numbers.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default ceiling for the composition sums, which cost `2^(n-1)` terms.
pub const DEFAULT_COMPOSITION_LIMIT: usize = 16;

/// An ordered list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::invalid(
                "composition parts must be positive and nonempty",
            ));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn prefix_sums(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// `self` dominates `other`: same length, every prefix sum at least as
    /// large.
    pub fn dominates(&self, other: &Composition) -> bool {
        self.len() == other.len()
            && self.total() == other.total()
            && self
                .prefix_sums()
                .iter()
                .zip(other.prefix_sums())
                .all(|(d, c)| *d >= c)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `2^(n-1)` compositions of `n`, largest first part first.
pub fn compositions(n: usize) -> Vec<Composition> {
    fn rec(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if n == 0 {
            out.push(Composition(prefix.clone()));
            return;
        }
        for first in (1..=n).rev() {
            prefix.push(first);
            rec(n - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of same-length compositions dominating `c`, by dynamic
/// programming over prefix sums.
pub fn dominance_count(c: &Composition) -> BigUint {
    let n = c.total();
    let r = c.len();
    let lower = c.prefix_sums();
    // ways[s]: prefixes of length i with sum s meeting the bounds so far
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for (i, &bound) in lower.iter().enumerate() {
        let remaining_parts = r - i - 1;
        let mut next = vec![BigUint::zero(); n + 1];
        for (s, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for t in (s + 1).max(bound)..=n - remaining_parts {
                next[t] += w;
            }
        }
        ways = next;
    }
    ways[n].clone()
}

/// Same count by explicit enumeration with prefix-sum pruning.
pub fn dominance_count_enumerated(c: &Composition) -> u64 {
    fn rec(lower: &[usize], n: usize, i: usize, sum: usize) -> u64 {
        let r = lower.len();
        if i == r {
            return (sum == n) as u64;
        }
        let remaining = r - i - 1;
        let mut count = 0;
        for part in 1..=n - sum - remaining {
            if sum + part >= lower[i] {
                count += rec(lower, n, i + 1, sum + part);
            }
        }
        count
    }
    rec(&c.prefix_sums(), c.total(), 0, 0)
}

/// `a_n`, `c_n` and `a_{n,k}` from the triple recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceTables {
    /// `a[n]` for `0 <= n <= N`.
    pub a: Vec<BigUint>,
    /// `ascent_start[n]` for `1 <= n <= N`; index 0 is unused and zero.
    pub ascent_start: Vec<BigUint>,
    /// `by_first_entry[n][k]` for `1 <= k <= n <= N`; other cells are zero.
    pub by_first_entry: Vec<Vec<BigUint>>,
}

impl RecurrenceTables {
    pub fn a_nk(&self, n: usize, k: usize) -> &BigUint {
        &self.by_first_entry[n][k]
    }
}

/// Evaluates
/// `a_n = sum_{i<n} a_i c_{n-i}`,
/// `c_n = sum_{i<n} i a_{n-1,i}`,
/// `a_{n,k} = sum_{i<k} a_i sum_{j=k-i}^{n-1-i} a_{n-1-i,j}` (and
/// `a_{n,n} = a_{n-1}`), with `a_0 = c_1 = 1`.
pub fn recurrence_tables(max_n: usize) -> RecurrenceTables {
    let mut a = vec![BigUint::one()];
    let mut c = vec![BigUint::zero(); max_n + 1];
    let mut ank = vec![vec![BigUint::zero(); max_n + 1]; max_n + 1];
    for n in 1..=max_n {
        for k in 1..n {
            let mut total = BigUint::zero();
            for i in 0..k {
                let m = n - 1 - i;
                let inner: BigUint = (k - i..=m).map(|j| &ank[m][j]).sum();
                total += &a[i] * inner;
            }
            ank[n][k] = total;
        }
        ank[n][n] = a[n - 1].clone();

        c[n] = if n == 1 {
            BigUint::one()
        } else {
            (1..n).map(|i| &ank[n - 1][i] * BigUint::from(i)).sum()
        };

        let an: BigUint = (0..n).map(|i| &a[i] * &c[n - i]).sum();
        a.push(an);
    }
    RecurrenceTables {
        a,
        ascent_start: c,
        by_first_entry: ank,
    }
}

fn check_composition_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "composition sum length",
            requested: n,
            limit,
        });
    }
    Ok(())
}

fn composition_sum(
    max_n: usize,
    limit: usize,
    weight: impl Fn(&Composition) -> BigUint,
) -> Result<Vec<BigUint>> {
    check_composition_limit(max_n, limit)?;
    let mut a = vec![BigUint::one()];
    for n in 1..=max_n {
        let an = compositions(n)
            .iter()
            .map(|c| {
                let prod: BigUint = c.parts().iter().map(|&p| a[p - 1].clone()).product();
                weight(c) * prod
            })
            .sum();
        a.push(an);
    }
    Ok(a)
}

/// `a_n = sum over compositions c of n of #{d >= c} * prod a_{c_i - 1}`.
pub fn composition_recurrence_a(max_n: usize) -> Result<Vec<BigUint>> {
    composition_recurrence_a_with_limit(max_n, DEFAULT_COMPOSITION_LIMIT)
}

pub fn composition_recurrence_a_with_limit(max_n: usize, limit: usize) -> Result<Vec<BigUint>> {
    composition_sum(max_n, limit, dominance_count)
}

/// The composition sum without the dominance weight.
pub fn catalan_via_compositions(max_n: usize) -> Result<Vec<BigUint>> {
    catalan_via_compositions_with_limit(max_n, DEFAULT_COMPOSITION_LIMIT)
}

pub fn catalan_via_compositions_with_limit(max_n: usize, limit: usize) -> Result<Vec<BigUint>> {
    composition_sum(max_n, limit, |_| BigUint::one())
}

/// `B_0 .. B_N` via the Bell triangle.
pub fn bell_numbers(max_n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    let mut row = vec![BigUint::one()];
    for _ in 1..=max_n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}
