use std::collections::BTreeMap;

use super::StarredPermutation;
use crate::error::{Error, Result};
use crate::perm::{fast_35241ok, lit_entries, reduce_unchecked, word_is_35241ok, Permutation};

/// For `pi = sigma n tau`: both parts are OK and every entry of `sigma`
/// exceeding `min(tau)` is a LIT entry of `sigma`.
pub fn split_condition_holds(sigma: &[u32], tau: &[u32]) -> bool {
    if !word_is_35241ok(sigma) || !word_is_35241ok(tau) {
        return false;
    }
    let Some(&tau_min) = tau.iter().min() else {
        return true;
    };
    let lit = lit_entries(sigma);
    sigma.iter().all(|e| *e < tau_min || lit.contains(e))
}

fn split_at_max(p: &Permutation) -> Result<(&[u32], u32, &[u32])> {
    let w = p.entries();
    let (pos, &max) = w
        .iter()
        .enumerate()
        .max_by_key(|&(_, &e)| e)
        .ok_or_else(|| Error::invalid("cannot split the empty permutation"))?;
    Ok((&w[..pos], max, &w[pos + 1..]))
}

/// Splits `p = sigma n tau`, returning `reduce(tau)` and `reduce(sigma)`
/// with one star per entry `c` of `tau`, placed before the smallest entry of
/// `sigma` exceeding `c` (or after the maximum if there is none).
pub fn star_encode(p: &Permutation) -> Result<(Permutation, StarredPermutation)> {
    if !p.is_standard() || p.is_empty() {
        return Err(Error::invalid(format!(
            "{} is not a nonempty standard permutation",
            p
        )));
    }
    if !fast_35241ok(p) {
        return Err(Error::invalid(format!("{} is not 3(5)241-OK", p)));
    }
    let (sigma, _, tau) = split_at_max(p)?;
    let rho = reduce_unchecked(tau);

    let mut sorted_sigma = sigma.to_vec();
    sorted_sigma.sort_unstable();
    let mut before: BTreeMap<u32, usize> = BTreeMap::new();
    let mut after_max = 0;
    for &c in tau {
        // rank of the smallest sigma entry above c, in reduced sigma
        let idx = sorted_sigma.partition_point(|&e| e < c);
        if idx < sorted_sigma.len() {
            *before.entry(idx as u32 + 1).or_default() += 1;
        } else {
            after_max += 1;
        }
    }
    let starred = StarredPermutation::new(reduce_unchecked(sigma), before, after_max)?;
    Ok((rho, starred))
}

/// Inverse of [`star_encode`].
pub fn star_decode(rho: &Permutation, starred: &StarredPermutation) -> Result<Permutation> {
    let base = starred.base();
    if !base.is_standard() || !rho.is_standard() {
        return Err(Error::invalid("star_decode expects standard permutations"));
    }
    if starred.star_count() != rho.len() {
        return Err(Error::invalid(format!(
            "{} stars cannot carry a permutation of length {}",
            starred.star_count(),
            rho.len()
        )));
    }
    // Interleave stars and base values in increasing order to recover the
    // actual values of sigma and the support of tau.
    let s = base.len() as u32;
    let mut rank = 0u32;
    let mut sigma_value = vec![0u32; s as usize + 1];
    let mut support = Vec::with_capacity(rho.len());
    for v in 1..=s {
        for _ in 0..starred.stars_before(v) {
            rank += 1;
            support.push(rank);
        }
        rank += 1;
        sigma_value[v as usize] = rank;
    }
    for _ in 0..starred.stars_after_max() {
        rank += 1;
        support.push(rank);
    }
    let n = rank + 1;
    let mut out: Vec<u32> = base
        .entries()
        .iter()
        .map(|&v| sigma_value[v as usize])
        .collect();
    out.push(n);
    out.extend(rho.entries().iter().map(|&r| support[r as usize - 1]));
    Ok(Permutation::from_vec_unchecked(out))
}
