use std::collections::{BTreeMap, BTreeSet};

use super::{MarkedPermutation, StarredPermutation};
use crate::error::{Error, Result};
use crate::perm::lit_entries;

/// Collapses each run of stars to a single mark, dropping stars next to the
/// maximum. The bit sequence has one bit per star plus one for the maximum:
/// a star directly in front of a non-maximal LIT entry, and the maximum
/// itself, give `1`; every other star gives `0`.
pub fn collapse_stars(starred: &StarredPermutation) -> Result<(MarkedPermutation, Vec<bool>)> {
    let base = starred.base();
    let max = base
        .max_entry()
        .ok_or_else(|| Error::invalid("cannot collapse stars on an empty permutation"))?;
    let mut bits = Vec::with_capacity(starred.star_count() + 1);
    let mut marks = BTreeSet::new();
    // LIT entries occur left to right in increasing order
    for e in lit_entries(base.entries()) {
        let stars = starred.stars_before(e);
        if e == max {
            bits.extend(std::iter::repeat_n(false, stars));
            bits.push(true);
            bits.extend(std::iter::repeat_n(false, starred.stars_after_max()));
        } else if stars > 0 {
            bits.extend(std::iter::repeat_n(false, stars - 1));
            bits.push(true);
            marks.insert(e);
        }
    }
    Ok((MarkedPermutation::new(base.clone(), marks)?, bits))
}

/// Inverse of [`collapse_stars`].
pub fn expand_stars(marked: &MarkedPermutation, bits: &[bool]) -> Result<StarredPermutation> {
    let ones = bits.iter().filter(|&&b| b).count();
    if ones != marked.marks().len() + 1 {
        return Err(Error::invalid(format!(
            "bit sequence has {} ones but {} marks need {}",
            ones,
            marked.marks().len(),
            marked.marks().len() + 1
        )));
    }
    let max = marked
        .base()
        .max_entry()
        .ok_or_else(|| Error::invalid("cannot expand stars on an empty permutation"))?;
    let mut targets = marked.marks().iter().copied();
    let mut before = BTreeMap::new();
    let mut zeros = 0;
    let mut seen_max = false;
    for &bit in bits {
        if !bit {
            zeros += 1;
            continue;
        }
        match targets.next() {
            Some(mark) => {
                before.insert(mark, zeros + 1);
            }
            None => {
                before.insert(max, zeros);
                seen_max = true;
            }
        }
        zeros = 0;
    }
    debug_assert!(seen_max);
    StarredPermutation::new(marked.base().clone(), before, zeros)
}
