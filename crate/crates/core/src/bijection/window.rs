//! The moving-window bijection from marked 321-avoiding permutations to lists
//! of nonempty 321-avoiding permutations, and its extension to 3(5)241-OK
//! permutations by sorting the tails between left-to-right maxima.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::Range;

use super::{MarkedPermutation, PermList};
use crate::error::{Error, Result};
use crate::perm::{
    fast_35241ok, lit_entries, lrmax_factorize, reduce_unchecked, word_is_35241ok, Permutation,
};

const PATTERN_321: [u32; 3] = [3, 2, 1];

fn is_321_avoiding(w: &[u32]) -> bool {
    crate::perm::word_avoids(w, &PATTERN_321)
}

fn lrmax_flags(w: &[u32]) -> Vec<bool> {
    let mut best = 0;
    w.iter()
        .map(|&e| {
            let is_max = e > best;
            best = best.max(e);
            is_max
        })
        .collect()
}

fn lit_positions(w: &[u32]) -> Vec<usize> {
    let lit: BTreeSet<u32> = lit_entries(w).into_iter().collect();
    (0..w.len()).filter(|&i| lit.contains(&w[i])).collect()
}

/// Everything the forward procedure computes on the way to its output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowTrace {
    /// Position ranges of the initial window's panes, left to right.
    pub initial_panes: Vec<Range<usize>>,
    /// Symbol associated with each successive window (`None` is the empty
    /// symbol), in the order the windows were generated.
    pub associations: Vec<Option<u32>>,
    /// Associations from last generated to first, followed by the initial
    /// pane starts in increasing order.
    pub insertion_list: Vec<Option<u32>>,
    /// Pane-start entries of each array row, left to right, top row first.
    pub rows: Vec<Vec<u32>>,
    /// The panes of each row as position ranges of the input.
    pub row_panes: Vec<Vec<Range<usize>>>,
}

impl WindowTrace {
    /// Unreduced row words, read from `word` (the input or any permutation
    /// with the same factor layout).
    pub fn row_words(&self, word: &[u32]) -> Vec<Vec<u32>> {
        self.row_panes
            .iter()
            .map(|panes| {
                panes
                    .iter()
                    .flat_map(|r| word[r.clone()].iter().copied())
                    .collect()
            })
            .collect()
    }
}

fn check_marked_321(q: &MarkedPermutation) -> Result<()> {
    if q.is_empty() || !q.base().is_standard() {
        return Err(Error::invalid("expected a nonempty standard permutation"));
    }
    if !is_321_avoiding(q.base().entries()) {
        return Err(Error::invalid(format!(
            "{} contains a 321 pattern",
            q.base()
        )));
    }
    Ok(())
}

/// Runs the moving window on a marked 321-avoiding permutation and records
/// every intermediate stage.
pub fn window_trace(q: &MarkedPermutation) -> Result<WindowTrace> {
    check_marked_321(q)?;
    trace_unchecked(q.base().entries(), q.marks())
}

fn trace_unchecked(w: &[u32], marks: &BTreeSet<u32>) -> Result<WindowTrace> {
    let n = w.len();
    let k = marks.len() + 1;
    let is_lrmax = lrmax_flags(w);
    let lit_pos = lit_positions(w);

    // Initial panes start at the first LIT entry and at the LIT entry right
    // after each marked one.
    let mut starts = vec![lit_pos[0]];
    for pair in lit_pos.windows(2) {
        if marks.contains(&w[pair[0]]) {
            starts.push(pair[1]);
        }
    }
    if starts.len() != k {
        return Err(Error::invalid("marks must be non-maximal LIT entries"));
    }
    let initial_panes: Vec<Range<usize>> = starts
        .iter()
        .enumerate()
        .map(|(i, &s)| s..starts.get(i + 1).copied().unwrap_or(n))
        .collect();

    let mut panes_by_start: BTreeMap<u32, Range<usize>> = initial_panes
        .iter()
        .map(|r| (w[r.start], r.clone()))
        .collect();
    let mut window: VecDeque<Range<usize>> = initial_panes.iter().cloned().collect();
    let mut empaned_from = starts[0];
    let mut associations = Vec::new();

    if empaned_from == 0 {
        // the window already covers everything: only the identity does this
        associations.push(None);
    } else {
        while !window.is_empty() {
            let threshold = window
                .iter()
                .take(window.len() - 1)
                .flat_map(|r| r.clone())
                .filter(|&i| !is_lrmax[i])
                .map(|i| w[i])
                .max();
            // left-to-right maxima increase, so the leftmost qualifying one
            // is the smallest
            let next =
                (0..empaned_from).find(|&i| is_lrmax[i] && threshold.is_none_or(|m| w[i] > m));
            match next {
                None => associations.push(None),
                Some(i) => {
                    associations.push(Some(w[i]));
                    let pane = i..empaned_from;
                    panes_by_start.insert(w[i], pane.clone());
                    window.push_front(pane);
                    empaned_from = i;
                }
            }
            window.pop_back();
        }
    }
    if empaned_from != 0 {
        return Err(Error::invalid(
            "moving window did not cover the permutation",
        ));
    }

    let insertion_list: Vec<Option<u32>> = associations
        .iter()
        .rev()
        .copied()
        .chain(starts.iter().map(|&s| Some(w[s])))
        .collect();

    let rows = fill_rows(&insertion_list, k)?;
    let row_panes = rows
        .iter()
        .map(|row| row.iter().map(|e| panes_by_start[e].clone()).collect())
        .collect();
    Ok(WindowTrace {
        initial_panes,
        associations,
        insertion_list,
        rows,
        row_panes,
    })
}

/// Fills a `k`-row array from the end of `list` backwards: columns right to
/// left, each column bottom to top, skipping rows already closed by an
/// empty symbol.
fn fill_rows(list: &[Option<u32>], k: usize) -> Result<Vec<Vec<u32>>> {
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut open = vec![true; k];
    let mut entries = list.iter().rev();
    'columns: loop {
        let mut any_open = false;
        for r in (0..k).rev() {
            if !open[r] {
                continue;
            }
            any_open = true;
            match entries.next() {
                None => break 'columns,
                Some(None) => open[r] = false,
                Some(Some(v)) => rows[r].push(*v),
            }
        }
        if !any_open {
            if entries.next().is_some() {
                return Err(Error::invalid("insertion list outlasted the array rows"));
            }
            break;
        }
    }
    for row in &mut rows {
        row.reverse();
    }
    Ok(rows)
}

/// `X_{n,k} -> Y_{n,k}` for 321-avoiding permutations.
pub fn window_forward(q: &MarkedPermutation) -> Result<PermList> {
    let trace = window_trace(q)?;
    Ok(reduce_rows(trace.row_words(q.base().entries())))
}

fn reduce_rows(rows: Vec<Vec<u32>>) -> PermList {
    PermList(rows.iter().map(|r| reduce_unchecked(r)).collect())
}

/// Values assigned by the reverse procedure, per item and position, with
/// the panes of every item.
struct InverseLayout {
    values: Vec<Vec<u32>>,
    panes: Vec<Vec<Range<usize>>>,
}

fn check_items(v: &PermList, predicate: fn(&[u32]) -> bool, what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::invalid("list must have at least one item"));
    }
    for item in v.items() {
        if item.is_empty() || !item.is_standard() {
            return Err(Error::invalid(
                "list items must be nonempty standard permutations",
            ));
        }
        if !predicate(item.entries()) {
            return Err(Error::invalid(format!("item {} is not {}", item, what)));
        }
    }
    Ok(())
}

fn inverse_layout(items: &[&[u32]]) -> Result<InverseLayout> {
    let k = items.len();
    let n: usize = items.iter().map(|w| w.len()).sum();
    let lrmax: Vec<Vec<bool>> = items.iter().map(|w| lrmax_flags(w)).collect();
    let mut values: Vec<Vec<u32>> = items.iter().map(|w| vec![0; w.len()]).collect();
    let mut pane_starts: Vec<BTreeSet<usize>> = Vec::with_capacity(k);
    let mut empaned_from: Vec<usize> = Vec::with_capacity(k);

    // LIT entries get n, n-1, ... from right to left across the list.
    let mut b = n as u32;
    let lits: Vec<Vec<usize>> = items.iter().map(|w| lit_positions(w)).collect();
    for i in (0..k).rev() {
        for &pos in lits[i].iter().rev() {
            values[i][pos] = b;
            b -= 1;
        }
    }
    for lit in &lits {
        pane_starts.push(BTreeSet::from([lit[0]]));
        empaned_from.push(lit[0]);
    }

    let mut cur = k - 1;
    let mut idle_visits = 0;
    while b > 0 {
        let item = items[cur];
        let mut leftmost: Option<usize> = None;
        while let Some(pos) = (0..item.len())
            .filter(|&p| values[cur][p] == 0)
            .max_by_key(|&p| item[p])
        {
            if pos < empaned_from[cur] && !lrmax[cur][pos] {
                break;
            }
            values[cur][pos] = b;
            b -= 1;
            leftmost = Some(leftmost.map_or(pos, |l: usize| l.min(pos)));
        }
        match leftmost {
            Some(l) => {
                idle_visits = 0;
                if l < empaned_from[cur] {
                    pane_starts[cur].insert(l);
                    empaned_from[cur] = l;
                }
            }
            None => {
                idle_visits += 1;
                if idle_visits > k {
                    return Err(Error::invalid("reverse procedure stalled"));
                }
            }
        }
        cur = (cur + k - 1) % k;
    }
    if empaned_from.iter().any(|&e| e != 0) {
        return Err(Error::invalid(
            "reverse procedure left entries outside every pane",
        ));
    }

    let panes = pane_starts
        .iter()
        .zip(items)
        .map(|(starts, w)| {
            let s: Vec<usize> = starts.iter().copied().collect();
            (0..s.len())
                .map(|j| s[j]..s.get(j + 1).copied().unwrap_or(w.len()))
                .collect()
        })
        .collect();
    Ok(InverseLayout { values, panes })
}

/// Concatenates all panes in increasing order of first entry and reads the
/// marks off the last pane of every item but the last.
fn assemble(values: &[Vec<u32>], panes: &[Vec<Range<usize>>]) -> Result<MarkedPermutation> {
    let mut all: Vec<(u32, usize, Range<usize>)> = panes
        .iter()
        .enumerate()
        .flat_map(|(i, ps)| ps.iter().map(move |r| (values[i][r.start], i, r.clone())))
        .collect();
    all.sort_unstable_by_key(|(first, _, _)| *first);
    let word: Vec<u32> = all
        .iter()
        .flat_map(|(_, i, r)| values[*i][r.clone()].iter().copied())
        .collect();
    let marks: BTreeSet<u32> = panes[..panes.len() - 1]
        .iter()
        .zip(values)
        .map(|(ps, vals)| {
            let last = ps.last().expect("every item has a pane");
            *vals[last.clone()].iter().max().expect("panes are nonempty")
        })
        .collect();
    MarkedPermutation::new(Permutation::new(word)?, marks)
}

/// `Y_{n,k} -> X_{n,k}` for 321-avoiding items.
pub fn window_inverse(v: &PermList) -> Result<MarkedPermutation> {
    check_items(v, is_321_avoiding, "321-avoiding")?;
    let items: Vec<&[u32]> = v.items().iter().map(|p| p.entries()).collect();
    let layout = inverse_layout(&items)?;
    assemble(&layout.values, &layout.panes)
}

/// The original tail after each left-to-right maximum, kept so that sorting
/// can be undone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailRecord {
    pub tails: Vec<Vec<u32>>,
}

/// Sorts the tail after every left-to-right maximum. Left-to-right maxima,
/// LIT entries and marks are unchanged; for an OK input the result avoids
/// 321.
pub fn sort_reduce(p: &MarkedPermutation) -> Result<(MarkedPermutation, TailRecord)> {
    let f = lrmax_factorize(p.base());
    let tails: Vec<Vec<u32>> = f.factors.iter().map(|x| x.tail.clone()).collect();
    let sorted: Vec<u32> = f
        .factors
        .iter()
        .flat_map(|x| {
            let mut t = x.tail.clone();
            t.sort_unstable();
            std::iter::once(x.max).chain(t)
        })
        .collect();
    let q = MarkedPermutation::new(Permutation::from_vec_unchecked(sorted), p.marks().clone())?;
    Ok((q, TailRecord { tails }))
}

/// Puts the recorded tails back in place of the sorted ones.
pub fn restore_tails(sorted: &Permutation, record: &TailRecord) -> Result<Permutation> {
    let f = lrmax_factorize(sorted);
    if f.factors.len() != record.tails.len() {
        return Err(Error::invalid(
            "tail record does not match the factorization",
        ));
    }
    let mut out = Vec::with_capacity(sorted.len());
    for (factor, tail) in f.factors.iter().zip(&record.tails) {
        let mut a = factor.tail.clone();
        let mut b = tail.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::invalid(
                "tail record does not match the factorization",
            ));
        }
        out.push(factor.max);
        out.extend_from_slice(tail);
    }
    Ok(Permutation::from_vec_unchecked(out))
}

/// `X_{n,k} -> Y_{n,k}` for 3(5)241-OK permutations: the window runs on the
/// tail-sorted permutation, and the rows are read back from the original.
pub fn ok_forward(p: &MarkedPermutation) -> Result<PermList> {
    if p.is_empty() || !p.base().is_standard() || !fast_35241ok(p.base()) {
        return Err(Error::invalid(format!(
            "{} is not a nonempty 3(5)241-OK permutation",
            p.base()
        )));
    }
    let (q, _) = sort_reduce(p)?;
    let trace = trace_unchecked(q.base().entries(), q.marks())?;
    Ok(reduce_rows(trace.row_words(p.base().entries())))
}

/// Inverse of [`ok_forward`].
pub fn ok_inverse(v: &PermList) -> Result<MarkedPermutation> {
    check_items(v, word_is_35241ok, "3(5)241-OK")?;
    let sorted: Vec<Permutation> = v
        .items()
        .iter()
        .map(|item| {
            let (q, _) = sort_reduce(&MarkedPermutation::unmarked(item.clone()))?;
            Ok(q.base().clone())
        })
        .collect::<Result<_>>()?;
    let items: Vec<&[u32]> = sorted.iter().map(|p| p.entries()).collect();
    let layout = inverse_layout(&items)?;
    // The sorted items received values order-isomorphic to themselves; the
    // originals take the same value sets, rank for rank.
    let values: Vec<Vec<u32>> = layout
        .values
        .iter()
        .zip(v.items())
        .map(|(assigned, original)| {
            let mut pool = assigned.clone();
            pool.sort_unstable();
            original
                .entries()
                .iter()
                .map(|&r| pool[r as usize - 1])
                .collect()
        })
        .collect();
    assemble(&values, &layout.panes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutations;

    fn marked(s: &str) -> MarkedPermutation {
        s.parse().unwrap()
    }

    pub(crate) const WORKED: &str =
        "3 1 5 2 8 4 6 12 7 15 9 17 10 11 20 25 26^ 13 27 28^ 14 29^ 16 30 18 19 21 22 23 24";
    pub(crate) const WORKED_IMAGE: &str =
        "2 1 4 5 3 / 2 3 1 / 3 1 5 2 7 4 6 9 8 11 10 / 3 1 2 6 11 4 5 7 8 9 10";

    #[test]
    fn worked_example_intermediate_stages() {
        let q = marked(WORKED);
        let t = window_trace(&q).unwrap();
        let show = |l: &[Option<u32>]| {
            l.iter()
                .map(|x| x.map_or("-".to_string(), |v| v.to_string()))
                .collect::<Vec<_>>()
                .join(" ")
        };
        assert_eq!(show(&t.associations), "17 15 - 12 - 8 - 3 -");
        assert_eq!(show(&t.insertion_list), "- 3 - 8 - 12 - 15 17 25 27 29 30");
        assert_eq!(
            t.rows,
            vec![vec![12, 25], vec![27], vec![3, 8, 15, 29], vec![17, 30]]
        );
        let words: Vec<String> = t
            .row_words(q.base().entries())
            .iter()
            .map(|r| Permutation::from_vec_unchecked(r.clone()).to_string())
            .collect();
        assert_eq!(
            words,
            vec![
                "12 7 25 26 13",
                "27 28 14",
                "3 1 5 2 8 4 6 15 9 29 16",
                "17 10 11 20 30 18 19 21 22 23 24"
            ]
        );
    }

    #[test]
    fn worked_example_both_directions() {
        let q = marked(WORKED);
        let v = window_forward(&q).unwrap();
        assert_eq!(v.to_string(), WORKED_IMAGE);
        assert_eq!(window_inverse(&v).unwrap(), q);
        assert_eq!(ok_forward(&q).unwrap(), v);
        assert_eq!(ok_inverse(&v).unwrap(), q);
    }

    #[test]
    fn identity_maps_to_itself() {
        let id = MarkedPermutation::unmarked(Permutation::identity(5));
        let v = window_forward(&id).unwrap();
        assert_eq!(v, PermList(vec![Permutation::identity(5)]));
        assert_eq!(window_inverse(&v).unwrap(), id);

        let t = window_trace(&id).unwrap();
        assert_eq!(t.associations, vec![None]);
    }

    #[test]
    fn identity_with_marks_splits_into_identities() {
        let q = marked("1 2^ 3 4^ 5 6");
        let v = window_forward(&q).unwrap();
        assert_eq!(v.to_string(), "1 2 / 1 2 / 1 2");
        assert_eq!(window_inverse(&v).unwrap(), q);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(window_forward(&marked("3 2 1")).is_err());
        assert!(window_forward(&MarkedPermutation::unmarked(Permutation::empty())).is_err());
        assert!(window_inverse(&"3 2 1".parse().unwrap()).is_err());
        assert!(window_inverse(&"1 / ()".parse().unwrap()).is_err());
        assert!(ok_forward(&marked("3 2 4 1")).is_err());
        assert!(ok_inverse(&"3 2 4 1".parse().unwrap()).is_err());
    }

    #[test]
    fn sort_reduce_examples() {
        let (q, record) = sort_reduce(&marked("3 2 1 4")).unwrap();
        assert_eq!(q.to_string(), "3 1 2 4");
        assert_eq!(lit_entries(&[3, 2, 1, 4]), lit_entries(q.base().entries()));
        assert_eq!(
            restore_tails(q.base(), &record).unwrap(),
            "3 2 1 4".parse().unwrap()
        );
        let (same, _) = sort_reduce(&marked("2 1 3 5 4")).unwrap();
        assert_eq!(same.to_string(), "2 1 3 5 4");
    }

    #[test]
    fn forward_images_are_lists_of_nonempty_avoiders() {
        for n in 1..=6 {
            for p in Permutations::new(n).filter(|p| is_321_avoiding(p.entries())) {
                let q = MarkedPermutation::unmarked(p);
                let v = window_forward(&q).unwrap();
                assert_eq!(v.len(), 1);
                assert_eq!(v.items()[0], *q.base());
            }
        }
    }
}
