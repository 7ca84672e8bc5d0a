use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use super::{par_count, reduce_unchecked, Permutation, Symmetry};
use crate::error::{Error, Result};

/// Census refuses lengths above this unless told otherwise.
pub const DEFAULT_CENSUS_LIMIT: usize = 10;

/// Hard ceiling on any configured census limit; `20!` still fits in a `u64`.
const MAX_CENSUS_LIMIT: usize = 20;

/// Calls `f` with the positions of every occurrence of `pattern` in `text`,
/// in lexicographic order of position tuples. Stops early if `f` breaks.
pub fn for_each_occurrence<F>(text: &[u32], pattern: &[u32], mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let m = pattern.len();
    if m > text.len() {
        return ControlFlow::Continue(());
    }
    // For each pattern slot, the earlier slots holding the nearest smaller and
    // nearest larger pattern values. Checking just those two keeps each
    // extension O(1).
    let bounds: Vec<(Option<usize>, Option<usize>)> = (0..m)
        .map(|t| {
            let mut lo: Option<usize> = None;
            let mut hi: Option<usize> = None;
            for s in 0..t {
                if pattern[s] < pattern[t] && lo.is_none_or(|l| pattern[s] > pattern[l]) {
                    lo = Some(s);
                }
                if pattern[s] > pattern[t] && hi.is_none_or(|h| pattern[s] < pattern[h]) {
                    hi = Some(s);
                }
            }
            (lo, hi)
        })
        .collect();
    let mut idx = vec![0usize; m];
    search(text, &bounds, &mut idx, 0, 0, &mut f)
}

fn search<F>(
    text: &[u32],
    bounds: &[(Option<usize>, Option<usize>)],
    idx: &mut [usize],
    t: usize,
    from: usize,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let m = idx.len();
    if t == m {
        return f(idx);
    }
    let (lo, hi) = bounds[t];
    let lo_val = lo.map(|s| text[idx[s]]);
    let hi_val = hi.map(|s| text[idx[s]]);
    for j in from..=text.len() - (m - t) {
        let x = text[j];
        if lo_val.is_some_and(|v| x < v) || hi_val.is_some_and(|v| x > v) {
            continue;
        }
        idx[t] = j;
        search(text, bounds, idx, t + 1, j + 1, f)?;
    }
    ControlFlow::Continue(())
}

/// All occurrences of `pattern` in `p`, as increasing position tuples.
pub fn occurrences(p: &Permutation, pattern: &Permutation) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let _ = for_each_occurrence(p.entries(), pattern.entries(), |idx| {
        out.push(idx.to_vec());
        ControlFlow::Continue(())
    });
    out
}

pub fn is_avoider(p: &Permutation, pattern: &Permutation) -> bool {
    word_avoids(p.entries(), pattern.entries())
}

pub fn word_avoids(text: &[u32], pattern: &[u32]) -> bool {
    for_each_occurrence(text, pattern, |_| ControlFlow::Break(())).is_continue()
}

/// A standard pattern with one marked letter, written like `3(5)241`.
///
/// A permutation satisfies it when every occurrence of the pattern with the
/// marked letter deleted extends, by one more entry in the marked letter's
/// slot, to an occurrence of the full pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnderlinedPattern {
    full: Permutation,
    /// 0-based position of the marked letter.
    marked: usize,
}

impl UnderlinedPattern {
    pub fn new(full: Permutation, marked: usize) -> Result<Self> {
        if !full.is_standard() {
            return Err(Error::invalid(format!("pattern {} is not standard", full)));
        }
        if marked >= full.len() {
            return Err(Error::invalid(format!(
                "marked position {} out of range for pattern {}",
                marked + 1,
                full
            )));
        }
        Ok(UnderlinedPattern { full, marked })
    }

    pub fn full(&self) -> &Permutation {
        &self.full
    }

    /// 0-based.
    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn marked_value(&self) -> u32 {
        self.full.entries()[self.marked]
    }

    pub fn len(&self) -> usize {
        self.full.len()
    }

    pub fn is_empty(&self) -> bool {
        self.full.is_empty()
    }

    /// The pattern with the marked letter removed, reduced.
    pub fn base(&self) -> Permutation {
        let mut w = self.full.entries().to_vec();
        w.remove(self.marked);
        reduce_unchecked(&w)
    }

    /// Applies the symmetry to the full pattern and carries the mark along
    /// with its letter.
    pub fn apply(&self, g: Symmetry) -> UnderlinedPattern {
        let m = self.full.len();
        let pos = self.marked;
        let val = self.marked_value() as usize;
        let (full, new_pos) = match g {
            Symmetry::Complement => (self.full.complement(), pos),
            Symmetry::Reverse => (self.full.reverse(), m - 1 - pos),
            Symmetry::Inverse => (self.full.inverse(), val - 1),
        };
        UnderlinedPattern {
            full: full.expect("pattern is standard"),
            marked: new_pos,
        }
    }
}

impl fmt::Display for UnderlinedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.full.entries().iter().enumerate() {
            if i == self.marked {
                write!(f, "({})", e)?;
            } else {
                write!(f, "{}", e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for UnderlinedPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("malformed underlined pattern {:?}", s));
        let mut letters = Vec::new();
        let mut marked = None;
        let mut chars = s.trim().chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '(' => {
                    let d = chars.next().and_then(|c| c.to_digit(10)).ok_or_else(bad)?;
                    if chars.next() != Some(')') || marked.is_some() {
                        return Err(bad());
                    }
                    marked = Some(letters.len());
                    letters.push(d);
                }
                c if c.is_ascii_digit() => letters.push(c.to_digit(10).unwrap()),
                c if c.is_whitespace() => {}
                _ => return Err(bad()),
            }
        }
        let marked = marked
            .ok_or_else(|| Error::invalid(format!("pattern {:?} has no marked letter", s)))?;
        let full = Permutation::new(letters).map_err(|_| bad())?;
        UnderlinedPattern::new(full, marked)
    }
}

/// Whether `p` satisfies the underlined pattern: each base occurrence has an
/// entry of `p` in the rectangle (position gap, value gap) left for the
/// marked letter.
pub fn satisfies(p: &Permutation, up: &UnderlinedPattern) -> bool {
    word_satisfies(p.entries(), &Extension::new(up))
}

/// Precomputed geometry of the marked letter relative to the base pattern.
pub(crate) struct Extension {
    base: Vec<u32>,
    /// Base slot immediately left / right of the marked position.
    left: Option<usize>,
    right: Option<usize>,
    /// Base slots holding the values just below / above the marked value.
    below: Option<usize>,
    above: Option<usize>,
}

impl Extension {
    pub(crate) fn new(up: &UnderlinedPattern) -> Self {
        let full = up.full.entries();
        let m = full.len();
        let mp = up.marked;
        let mv = full[mp];
        let to_base = |q: usize| if q < mp { q } else { q - 1 };
        let slot_of_value = |v: u32| full.iter().position(|&e| e == v).map(to_base);
        Extension {
            base: up.base().into_vec(),
            left: mp.checked_sub(1),
            right: (mp + 1 < m).then_some(mp),
            below: if mv > 1 { slot_of_value(mv - 1) } else { None },
            above: slot_of_value(mv + 1),
        }
    }
}

pub(crate) fn word_satisfies(text: &[u32], ext: &Extension) -> bool {
    for_each_occurrence(text, &ext.base, |idx| {
        let start = ext.left.map_or(0, |s| idx[s] + 1);
        let end = ext.right.map_or(text.len(), |s| idx[s]);
        let lo = ext.below.map_or(0, |s| text[idx[s]]);
        let hi = ext.above.map_or(u32::MAX, |s| text[idx[s]]);
        if text[start.min(end)..end].iter().any(|&x| lo < x && x < hi) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    })
    .is_continue()
}

/// Number of permutations of `1..=n` satisfying `up`, by exhaustive search.
pub fn census(up: &UnderlinedPattern, n: usize) -> Result<u64> {
    census_with_limit(up, n, DEFAULT_CENSUS_LIMIT)
}

pub fn census_with_limit(up: &UnderlinedPattern, n: usize, limit: usize) -> Result<u64> {
    check_census_limit(n, limit)?;
    let ext = Extension::new(up);
    Ok(par_count(n, |w| word_satisfies(w, &ext)))
}

pub fn check_census_limit(n: usize, limit: usize) -> Result<()> {
    let limit = limit.min(MAX_CENSUS_LIMIT);
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "census length",
            requested: n,
            limit,
        });
    }
    Ok(())
}

/// Recursive test for `3(5)241`: the tails between left-to-right maxima
/// must be value-ordered left to right and each tail must itself pass.
pub fn fast_35241ok(p: &Permutation) -> bool {
    word_is_35241ok(p.entries())
}

pub fn word_is_35241ok(word: &[u32]) -> bool {
    let mut head = 0u32;
    let mut tail_start = 0usize;
    let mut prev_tails_max = 0u32;
    let mut cur_tail_min = u32::MAX;
    let mut cur_tail_max = 0u32;
    let mut first = true;
    for (i, &e) in word.iter().enumerate() {
        if first || e > head {
            if !first && !close_tail(&word[tail_start..i], prev_tails_max, cur_tail_min) {
                return false;
            }
            prev_tails_max = prev_tails_max.max(cur_tail_max);
            cur_tail_min = u32::MAX;
            cur_tail_max = 0;
            head = e;
            tail_start = i + 1;
            first = false;
        } else {
            cur_tail_min = cur_tail_min.min(e);
            cur_tail_max = cur_tail_max.max(e);
        }
    }
    first || close_tail(&word[tail_start..], prev_tails_max, cur_tail_min)
}

fn close_tail(tail: &[u32], prev_tails_max: u32, tail_min: u32) -> bool {
    tail.is_empty() || (prev_tails_max < tail_min && word_is_35241ok(tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutations;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn up(s: &str) -> UnderlinedPattern {
        s.parse().unwrap()
    }

    #[test]
    fn occurrence_examples() {
        let occ = occurrences(&p("3 5 1 2 4"), &p("2 3 1"));
        assert!(occ.contains(&vec![0, 1, 3]));
        assert!(occurrences(&p("1 2"), &p("1 2 3")).is_empty());
        assert_eq!(occurrences(&p("3 2 1"), &p("3 2 1")), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn occurrences_are_lexicographic_and_exact() {
        let text = p("2 4 1 5 3 6");
        let pat = p("1 3 2");
        let got = occurrences(&text, &pat);
        let mut brute = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    let w = [text.entries()[a], text.entries()[b], text.entries()[c]];
                    if reduce_unchecked(&w) == pat {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(got, brute);
    }

    #[test]
    fn parse_and_display() {
        let x = up("3(5)241");
        assert_eq!(x.marked(), 1);
        assert_eq!(x.base(), p("3 2 4 1"));
        assert_eq!(x.to_string(), "3(5)241");
        assert_eq!(up("(1)324").marked(), 0);
        assert!("3241".parse::<UnderlinedPattern>().is_err());
        assert!("(3)(2)41".parse::<UnderlinedPattern>().is_err());
        assert!("3(2)21".parse::<UnderlinedPattern>().is_err());
        assert!("3(5241".parse::<UnderlinedPattern>().is_err());
        assert!("35(7)241".parse::<UnderlinedPattern>().is_err());
    }

    #[test]
    fn satisfies_examples() {
        let x = up("3(5)241");
        assert!(!satisfies(&p("3 2 4 1"), &x));
        assert!(satisfies(&p("3 5 2 4 1"), &x));
        assert!(satisfies(&Permutation::empty(), &x));
        let ok4: Vec<_> = Permutations::new(4).filter(|q| !satisfies(q, &x)).collect();
        assert_eq!(ok4, vec![p("3 2 4 1")]);
    }

    #[test]
    fn census_small_terms() {
        let x = up("3(5)241");
        assert_eq!(census(&x, 0).unwrap(), 1);
        assert_eq!(census(&x, 4).unwrap(), 23);
        assert_eq!(census(&x, 5).unwrap(), 104);
        assert_eq!(census(&up("(1)2"), 0).unwrap(), 1);
    }

    #[test]
    fn census_limit() {
        let x = up("3(5)241");
        assert!(matches!(
            census(&x, 11),
            Err(Error::LimitExceeded {
                requested: 11,
                limit: 10,
                ..
            })
        ));
        assert!(census_with_limit(&x, 11, 5).is_err());
        assert_eq!(census_with_limit(&x, 3, 3).unwrap(), 6);
    }

    #[test]
    fn fast_predicate_examples() {
        assert!(!fast_35241ok(&p("3 2 4 1")));
        assert!(fast_35241ok(&Permutation::identity(6)));
        assert!(fast_35241ok(&Permutation::empty()));
    }

    #[test]
    fn fast_predicate_agrees_with_generic() {
        let x = up("3(5)241");
        for n in 0..=7 {
            for q in Permutations::new(n) {
                assert_eq!(fast_35241ok(&q), satisfies(&q, &x), "{}", q);
            }
        }
    }

    /// Generic satisfies against a check that enumerates full-pattern
    /// occurrences instead of scanning the gap.
    #[test]
    fn satisfies_matches_full_occurrence_definition() {
        let pats = [
            "3(5)241", "(1)324", "32(4)1", "3(1)42", "321(4)", "4(2)31", "(2)1",
        ];
        for s in pats {
            let x = up(s);
            let base = x.base();
            for n in 0..=6 {
                for q in Permutations::new(n) {
                    let full_occ = occurrences(&q, x.full());
                    let slow = occurrences(&q, &base).iter().all(|b| {
                        full_occ.iter().any(|f| {
                            let mut g = f.clone();
                            g.remove(x.marked());
                            &g == b
                        })
                    });
                    assert_eq!(satisfies(&q, &x), slow, "{} on {}", s, q);
                }
            }
        }
    }

    #[test]
    fn avoider_examples() {
        let p321 = p("3 2 1");
        assert!(is_avoider(&p("1 2 3"), &p321));
        assert!(!is_avoider(&p("3 2 1"), &p321));
        assert_eq!(
            Permutations::new(4)
                .filter(|q| is_avoider(q, &p321))
                .count(),
            14
        );
    }

    proptest! {
        #[test]
        fn symmetry_transports_satisfaction(
            q in (0usize..=6).prop_flat_map(|n| {
                Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()
            }),
            pat in proptest::sample::select(vec![
                "3(5)241", "4(2)31", "(1)324", "32(4)1", "2(1)3", "1(4)23", "(3)142",
            ]),
            g in proptest::sample::select(Symmetry::ALL.to_vec()),
        ) {
            let q = Permutation::new(q).unwrap();
            let x = up(pat);
            let gq = q.apply_symmetry(&[g]).unwrap();
            prop_assert_eq!(satisfies(&q, &x), satisfies(&gq, &x.apply(g)));
        }
    }
}
