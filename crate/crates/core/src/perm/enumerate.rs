use rayon::prelude::*;

use super::Permutation;

/// All permutations of `1..=n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Option<Vec<u32>>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Permutations {
            current: Some((1..=n as u32).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(Permutation::from_vec_unchecked(cur))
    }
}

/// Advances `w` to its lexicographic successor; false when `w` was the last.
pub(crate) fn next_permutation(w: &mut [u32]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// Visits every permutation of `1..=n` in lexicographic order without
/// allocating per permutation.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut w: Vec<u32> = (1..=n as u32).collect();
    loop {
        f(&w);
        if !next_permutation(&mut w) {
            break;
        }
    }
}

/// Counts permutations of `1..=n` satisfying `pred`, splitting the search by
/// first entry across threads. The merged count equals the sequential one.
pub fn par_count<F>(n: usize, pred: F) -> u64
where
    F: Fn(&[u32]) -> bool + Sync,
{
    if n < 2 {
        let mut count = 0;
        for_each_permutation(n, |w| count += pred(w) as u64);
        return count;
    }
    (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut w: Vec<u32> = std::iter::once(first)
                .chain((1..=n as u32).filter(|&v| v != first))
                .collect();
            let mut count = 0u64;
            loop {
                count += pred(&w) as u64;
                if !next_permutation(&mut w[1..]) {
                    break;
                }
            }
            count
        })
        .sum()
}
