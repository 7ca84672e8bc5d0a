//! Exhaustive enumerators and the verification suites behind the `verify`
//! command.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bijection::{
    eigen_forward, eigen_inverse, ok_forward, ok_inverse, window_forward, window_inverse,
    EigenPair, MarkedPermutation, PermList,
};
use crate::error::{Error, Result};
use crate::four_patterns::{
    a051295_seq, classify, from_partition_decreasing, from_partition_increasing, new_seq,
    patience_ok, table_mismatches, to_partition_decreasing, to_partition_increasing, u_nk,
    u_nk_series, wilf_map,
};
use crate::perm::{
    census, check_census_limit, fast_35241ok, lit_entries, lrmax_factorize, reduce, satisfies,
    word_avoids, Permutation, Permutations, UnderlinedPattern, DEFAULT_CENSUS_LIMIT,
};
use crate::recurrences::{
    bell_numbers, catalan_via_compositions, composition_recurrence_a, compositions,
    recurrence_tables,
};
use crate::series::{eigensequence, verify_shift};

/// Standard permutations of `[n]` satisfying `keep`, in lexicographic order.
pub fn permutations_where<F>(n: usize, keep: F) -> Vec<Permutation>
where
    F: Fn(&Permutation) -> bool,
{
    Permutations::new(n).filter(|p| keep(p)).collect()
}

/// The 3(5)241-OK permutations of `[n]`.
pub fn ok_permutations(n: usize) -> Vec<Permutation> {
    permutations_where(n, fast_35241ok)
}

/// The 321-avoiding permutations of `[n]`.
pub fn avoiders_321(n: usize) -> Vec<Permutation> {
    permutations_where(n, |p| word_avoids(p.entries(), &[3, 2, 1]))
}

/// Every legal mark set on `p` with exactly `k - 1` marks.
pub fn markings(p: &Permutation, k: usize) -> Vec<MarkedPermutation> {
    let lit = lit_entries(p.entries());
    let candidates: Vec<u32> = lit
        .iter()
        .copied()
        .filter(|&v| Some(v) != p.max_entry())
        .collect();
    if k == 0 || k - 1 > candidates.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << candidates.len()) {
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        let marks = (0..candidates.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| candidates[i])
            .collect();
        out.push(MarkedPermutation::new(p.clone(), marks).expect("legal marks"));
    }
    out
}

/// Every legal mark set on `p`.
pub fn all_markings(p: &Permutation) -> Vec<MarkedPermutation> {
    (1..=p.len().max(1)).flat_map(|k| markings(p, k)).collect()
}

/// All lists of `parts` nonnegative integers summing to `total`.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in weak_compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All lists whose `i`-th item is drawn from `by_len[sizes[i]]`.
pub fn lists_with_sizes(sizes: &[usize], by_len: &[Vec<Permutation>]) -> Vec<PermList> {
    let mut acc: Vec<Vec<Permutation>> = vec![Vec::new()];
    for &s in sizes {
        let mut next = Vec::with_capacity(acc.len() * by_len[s].len());
        for prefix in &acc {
            for q in &by_len[s] {
                let mut v = prefix.clone();
                v.push(q.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc.into_iter().map(PermList).collect()
}

/// `k`-lists of nonempty 321-avoiders of total length `n`.
pub fn y_set(n: usize, k: usize, avoiders_by_len: &[Vec<Permutation>]) -> Vec<PermList> {
    compositions(n)
        .into_iter()
        .filter(|c| c.len() == k)
        .flat_map(|c| lists_with_sizes(c.parts(), avoiders_by_len))
        .collect()
}

/// `(rho, v)` with `rho` OK of length `k - 1` and `v` a `k`-list of possibly
/// empty OK permutations, `k + total length = n`.
pub fn eigen_pairs(n: usize, ok_by_len: &[Vec<Permutation>]) -> Vec<EigenPair> {
    let mut out = Vec::new();
    for k in 1..=n {
        for sizes in weak_compositions(n - k, k) {
            for lists in lists_with_sizes(&sizes, ok_by_len) {
                for rho in &ok_by_len[k - 1] {
                    out.push(EigenPair {
                        rho: rho.clone(),
                        lists: lists.clone(),
                    });
                }
            }
        }
    }
    out
}

fn catalan(n: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for i in 0..n {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

/// `|X_{n,k}|`: marked 321-avoiders with `k - 1` marks, counted through the
/// number of LIT entries.
pub fn x_count(n: usize, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::from(0u32);
    }
    let binom = |a: usize, b: usize| -> BigUint {
        if b > a {
            return BigUint::from(0u32);
        }
        (0..b).fold(BigUint::from(1u32), |acc, i| {
            acc * BigUint::from(a - i) / BigUint::from(i + 1)
        })
    };
    avoiders_321(n)
        .iter()
        .map(|q| binom(lit_entries(q.entries()).len() - 1, k - 1))
        .sum()
}

/// `|Y_{n,k}|`: a product of Catalan numbers over each composition.
pub fn y_count(n: usize, k: usize) -> BigUint {
    compositions(n)
        .into_iter()
        .filter(|c| c.len() == k)
        .map(|c| c.parts().iter().map(|&s| catalan(s)).product::<BigUint>())
        .sum()
}

fn reduced_factor_multiset(words: &[&[u32]]) -> BTreeMap<Vec<u32>, usize> {
    let mut out = BTreeMap::new();
    for w in words {
        let p = reduce(w).expect("distinct entries");
        for f in lrmax_factorize(&p).factors {
            let r = reduce(&f.entries().collect::<Vec<_>>()).expect("distinct entries");
            *out.entry(r.into_vec()).or_insert(0) += 1;
        }
    }
    out
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_failures(name: impl Into<String>, checked: String, failures: Vec<String>) -> Self {
        match failures.first() {
            None => Check::new(name, true, checked),
            Some(first) => Check::new(
                name,
                false,
                format!("{} failures, first: {}", failures.len(), first),
            ),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{} {}: {}", status, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}", c)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Recurrences,
    Bijection,
    FourPatterns,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recurrences" => Ok(Suite::Recurrences),
            "bijection" => Ok(Suite::Bijection),
            "fourpatterns" => Ok(Suite::FourPatterns),
            "all" => Ok(Suite::All),
            other => Err(Error::invalid(format!(
                "unknown suite {:?} (expected recurrences, bijection, fourpatterns or all)",
                other
            ))),
        }
    }
}

/// Runs a suite exhaustively for every length up to `max_n`.
pub fn run_suite(suite: Suite, max_n: usize) -> Result<Report> {
    check_census_limit(max_n, DEFAULT_CENSUS_LIMIT)?;
    let mut report = Report::default();
    if matches!(suite, Suite::Recurrences | Suite::All) {
        recurrence_checks(max_n, &mut report);
    }
    if matches!(suite, Suite::Bijection | Suite::All) {
        report.push(check_window(max_n));
        report.push(check_window_counts(max_n));
        report.push(check_ok_bijection(max_n));
        report.push(check_eigen(max_n));
    }
    if matches!(suite, Suite::FourPatterns | Suite::All) {
        four_pattern_checks(max_n, &mut report)?;
    }
    Ok(report)
}

fn pattern(s: &str) -> UnderlinedPattern {
    s.parse().expect("valid pattern literal")
}

fn census_matches(up: &str, expected: &[BigUint], max_n: usize) -> Check {
    let up = pattern(up);
    let failures: Vec<String> = (0..=max_n)
        .filter_map(|n| {
            let got = census(&up, n).expect("within limit");
            (BigUint::from(got) != expected[n])
                .then(|| format!("n={}: {} vs {}", n, got, expected[n]))
        })
        .collect();
    Check::from_failures(
        format!("census {}", up),
        format!("n <= {}", max_n),
        failures,
    )
}

fn recurrence_checks(max_n: usize, report: &mut Report) {
    // b_{n+1} counts length n
    let b = eigensequence(max_n + 2);
    let shifted: Vec<BigUint> = b
        .iter()
        .map(|x| x.to_biguint().expect("positive"))
        .collect();
    report.push(Check::new(
        "eigensequence shift",
        verify_shift(&b, b.len()),
        format!("{} terms", b.len()),
    ));
    report.push(census_matches("3(5)241", &shifted, max_n));

    let fast: Vec<String> = (0..=max_n)
        .filter_map(|n| {
            let up = pattern("3(5)241");
            let bad = Permutations::new(n).find(|p| fast_35241ok(p) != satisfies(p, &up));
            bad.map(|p| format!("{} disagrees", p))
        })
        .collect();
    report.push(Check::from_failures(
        "fast 3(5)241 check",
        format!("n <= {}", max_n),
        fast,
    ));

    let t2 = recurrence_tables(max_n).a;
    let t3 = composition_recurrence_a(max_n.min(16)).expect("within limit");
    let mut failures = Vec::new();
    for n in 0..=max_n {
        if t2[n] != shifted[n] {
            failures.push(format!("a_{} = {} vs {}", n, t2[n], shifted[n]));
        }
        if n < t3.len() && t3[n] != t2[n] {
            failures.push(format!("composition recurrence a_{} = {}", n, t3[n]));
        }
    }
    report.push(Check::from_failures(
        "recurrences vs eigensequence",
        format!("n <= {}", max_n),
        failures,
    ));

    let cat = catalan_via_compositions(max_n.min(16)).expect("within limit");
    let failures = (0..cat.len())
        .filter_map(|n| {
            let brute = avoiders_321(n).len();
            (BigUint::from(brute) != cat[n]).then(|| format!("n={}: {} vs {}", n, cat[n], brute))
        })
        .collect();
    report.push(Check::from_failures(
        "undominated recurrence vs 321-avoiders",
        format!("n <= {}", max_n),
        failures,
    ));
}

/// Window bijection on `X_{n,k}` for `1 <= n <= max_n`: injective, image
/// exactly `Y_{n,k}`, both round trips.
pub fn check_window(max_n: usize) -> Check {
    let by_len: Vec<Vec<Permutation>> = (0..=max_n).map(avoiders_321).collect();
    let mut failures = Vec::new();
    let mut inputs = 0usize;
    for n in 1..=max_n {
        for k in 1..=n {
            let xs: Vec<MarkedPermutation> =
                by_len[n].iter().flat_map(|q| markings(q, k)).collect();
            let ys: HashSet<PermList> = y_set(n, k, &by_len).into_iter().collect();
            inputs += xs.len();
            let images: Vec<Result<PermList>> = xs.par_iter().map(window_forward).collect();
            let mut seen = HashSet::new();
            for (x, img) in xs.iter().zip(images) {
                match img {
                    Err(e) => failures.push(format!("{}: {}", x, e)),
                    Ok(v) => {
                        if !ys.contains(&v) {
                            failures.push(format!("{} -> {} outside Y", x, v));
                        }
                        match window_inverse(&v) {
                            Ok(back) if back == *x => {}
                            _ => failures.push(format!("{} does not round trip", x)),
                        }
                        if !seen.insert(v.clone()) {
                            failures.push(format!("{} collides", v));
                        }
                    }
                }
            }
            if seen.len() != ys.len() {
                failures.push(format!(
                    "n={} k={}: image {} of {}",
                    n,
                    k,
                    seen.len(),
                    ys.len()
                ));
            }
            let back: Vec<String> = ys
                .par_iter()
                .filter_map(
                    |y| match window_inverse(y).and_then(|x| window_forward(&x)) {
                        Ok(v) if v == *y => None,
                        _ => Some(format!("{} does not round trip", y)),
                    },
                )
                .collect();
            failures.extend(back);
        }
    }
    Check::from_failures(
        "window bijection X -> Y",
        format!("n <= {}, {} inputs", max_n, inputs),
        failures,
    )
}

/// `|X_{n,k}| = |Y_{n,k}|` from the two independent counts.
pub fn check_window_counts(max_n: usize) -> Check {
    let failures = (1..=max_n)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .filter_map(|(n, k)| {
            let (x, y) = (x_count(n, k), y_count(n, k));
            (x != y).then(|| format!("n={} k={}: {} vs {}", n, k, x, y))
        })
        .collect();
    Check::from_failures("|X| = |Y|", format!("n <= {}", max_n), failures)
}

/// Round trip on every OK permutation with every legal mark set, plus the
/// reduced-factor multiset check.
pub fn check_ok_bijection(max_n: usize) -> Check {
    let mut failures = Vec::new();
    let mut inputs = 0usize;
    for n in 1..=max_n {
        let xs: Vec<MarkedPermutation> = ok_permutations(n).iter().flat_map(all_markings).collect();
        inputs += xs.len();
        let results: Vec<std::result::Result<PermList, String>> = xs
            .par_iter()
            .map(|x| {
                let v = ok_forward(x).map_err(|e| format!("{}: {}", x, e))?;
                let back = ok_inverse(&v).map_err(|e| format!("{}: {}", v, e))?;
                if back != *x {
                    return Err(format!("{} -> {} -> {}", x, v, back));
                }
                let items: Vec<&[u32]> = v.items().iter().map(|q| q.entries()).collect();
                if reduced_factor_multiset(&items) != reduced_factor_multiset(&[x.base().entries()])
                {
                    return Err(format!("{} -> {} changes the factors", x, v));
                }
                Ok(v)
            })
            .collect();
        let mut seen = HashSet::new();
        for r in results {
            match r {
                Err(e) => failures.push(e),
                Ok(v) => {
                    if !seen.insert(v.clone()) {
                        failures.push(format!("{} collides", v));
                    }
                }
            }
        }
    }
    Check::from_failures(
        "OK-permutation bijection",
        format!("n <= {}, {} inputs", max_n, inputs),
        failures,
    )
}

/// `A_n` to pairs: round trips both ways, image count `b_{n+1}`.
pub fn check_eigen(max_n: usize) -> Check {
    let ok_by_len: Vec<Vec<Permutation>> = (0..=max_n).map(ok_permutations).collect();
    let b = eigensequence(max_n + 2);
    let mut failures = Vec::new();
    for n in 1..=max_n {
        let results: Vec<std::result::Result<EigenPair, String>> = ok_by_len[n]
            .par_iter()
            .map(|p| {
                let pair = eigen_forward(p).map_err(|e| format!("{}: {}", p, e))?;
                match eigen_inverse(&pair) {
                    Ok(back) if back == *p => Ok(pair),
                    _ => Err(format!("{} -> {} does not round trip", p, pair)),
                }
            })
            .collect();
        let mut seen = HashSet::new();
        for r in results {
            match r {
                Err(e) => failures.push(e),
                Ok(pair) => {
                    if !seen.insert(pair.clone()) {
                        failures.push(format!("{} collides", pair));
                    }
                }
            }
        }
        let pairs = eigen_pairs(n, &ok_by_len);
        if seen.len() != pairs.len() || BigUint::from(seen.len()) != b[n].magnitude().clone() {
            failures.push(format!(
                "n={}: {} images, {} pairs, b = {}",
                n,
                seen.len(),
                pairs.len(),
                b[n]
            ));
        }
        let back: Vec<String> = pairs
            .par_iter()
            .filter_map(
                |pair| match eigen_inverse(pair).and_then(|p| eigen_forward(&p)) {
                    Ok(q) if q == *pair => None,
                    _ => Some(format!("{} does not round trip", pair)),
                },
            )
            .collect();
        failures.extend(back);
    }
    Check::from_failures("eigen bijection", format!("n <= {}", max_n), failures)
}

fn four_pattern_checks(max_n: usize, report: &mut Report) -> Result<()> {
    let classes = classify()?;
    let trivial: usize = classes
        .iter()
        .filter(|c| c.trivial)
        .map(|c| c.members.len())
        .sum();
    let mut sizes: Vec<usize> = classes
        .iter()
        .filter(|c| !c.trivial)
        .map(|c| c.members.len())
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    report.push(Check::new(
        "classification split",
        trivial == 64 && sizes == [8, 8, 8, 4, 4],
        format!("{} trivial, nontrivial orbit sizes {:?}", trivial, sizes),
    ));
    let mismatches = table_mismatches(&classes);
    report.push(Check::from_failures(
        "classification table",
        "members and labels agree".to_string(),
        mismatches,
    ));

    report.push(census_matches("32(4)1", &bell_numbers(max_n), max_n));
    report.push(census_matches("31(4)2", &bell_numbers(max_n), max_n));
    report.push(census_matches("(1)324", &a051295_seq(max_n), max_n));
    report.push(census_matches("321(4)", &new_seq(max_n), max_n));

    let mut failures = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            let brute = u_nk(n, k)?;
            if BigUint::from(brute) != u_nk_series(n, k) {
                failures.push(format!(
                    "u_{{{},{}}} = {} vs {}",
                    n,
                    k,
                    brute,
                    u_nk_series(n, k)
                ));
            }
        }
    }
    report.push(Check::from_failures(
        "u_nk",
        format!("n <= {}", max_n),
        failures,
    ));

    report.push(check_partition_maps(max_n));
    report.push(check_wilf(max_n));
    report.push(check_patience(max_n));
    Ok(())
}

/// Both set-partition maps round trip on their OK sets.
pub fn check_partition_maps(max_n: usize) -> Check {
    let inc = pattern("32(4)1");
    let dec = pattern("31(4)2");
    let mut failures = Vec::new();
    for n in 0..=max_n {
        for p in Permutations::new(n) {
            if satisfies(&p, &inc) {
                match to_partition_increasing(&p) {
                    Ok(part) if from_partition_increasing(&part) == p => {}
                    _ => failures.push(format!("increasing map fails on {}", p)),
                }
            }
            if satisfies(&p, &dec) {
                match to_partition_decreasing(&p) {
                    Ok(part) if from_partition_decreasing(&part) == p => {}
                    _ => failures.push(format!("decreasing map fails on {}", p)),
                }
            }
        }
    }
    Check::from_failures("set partition maps", format!("n <= {}", max_n), failures)
}

/// The left-to-right-minima map is a bijection between the two OK sets.
pub fn check_wilf(max_n: usize) -> Check {
    let from = pattern("(1)324");
    let to = pattern("(1)342");
    let mut failures = Vec::new();
    for n in 0..=max_n {
        let targets: HashSet<Permutation> = permutations_where(n, |p| satisfies(p, &to))
            .into_iter()
            .collect();
        let mut images = HashSet::new();
        for p in permutations_where(n, |p| satisfies(p, &from)) {
            match wilf_map(&p) {
                Ok(q) if targets.contains(&q) => {
                    if !images.insert(q.clone()) {
                        failures.push(format!("{} collides", q));
                    }
                }
                _ => failures.push(format!("{} maps outside the target", p)),
            }
        }
        if images.len() != targets.len() {
            failures.push(format!(
                "n={}: {} images of {}",
                n,
                images.len(),
                targets.len()
            ));
        }
    }
    Check::from_failures(
        "left-to-right-minima map",
        format!("n <= {}", max_n),
        failures,
    )
}

/// The adjacency condition coincides with `3(1)42`.
pub fn check_patience(max_n: usize) -> Check {
    let up = pattern("3(1)42");
    let failures = (0..=max_n)
        .flat_map(|n| {
            Permutations::new(n)
                .filter(|p| patience_ok(p) != satisfies(p, &up))
                .take(1)
        })
        .map(|p| format!("{} disagrees", p))
        .collect();
    Check::from_failures(
        "adjacent 342 condition",
        format!("n <= {}", max_n),
        failures,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerator_sizes() {
        let sizes: Vec<usize> = (0..=6).map(|n| avoiders_321(n).len()).collect();
        assert_eq!(sizes, [1, 1, 2, 5, 14, 42, 132]);
        let sizes: Vec<usize> = (0..=6).map(|n| ok_permutations(n).len()).collect();
        assert_eq!(sizes, [1, 1, 2, 6, 23, 104, 531]);
        assert_eq!(
            weak_compositions(2, 2),
            [vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(weak_compositions(0, 0), [Vec::<usize>::new()]);
        assert!(weak_compositions(1, 0).is_empty());
    }

    #[test]
    fn markings_of_identity() {
        let id = Permutation::identity(4);
        assert_eq!(all_markings(&id).len(), 8);
        assert_eq!(markings(&id, 2).len(), 3);
        assert!(markings(&id, 5).is_empty());
        assert!(markings(&id, 0).is_empty());
    }

    #[test]
    fn counts_agree() {
        assert_eq!(x_count(4, 2), y_count(4, 2));
        assert_eq!(y_count(3, 3), BigUint::from(1u32));
        let total: BigUint = (1..=4).map(|k| x_count(4, k)).sum();
        // every marked 321-avoider of length 4
        let direct: usize = avoiders_321(4).iter().map(|q| all_markings(q).len()).sum();
        assert_eq!(total, BigUint::from(direct));
    }

    #[test]
    fn eigen_pair_count() {
        let ok: Vec<Vec<Permutation>> = (0..=5).map(ok_permutations).collect();
        let sizes: Vec<usize> = (1..=5).map(|n| eigen_pairs(n, &ok).len()).collect();
        assert_eq!(sizes, [1, 2, 6, 23, 104]);
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Recurrences, Suite::Bijection, Suite::FourPatterns] {
            let report = run_suite(suite, 5).unwrap();
            assert!(report.passed(), "{}", report);
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("everything".parse::<Suite>().is_err());
        assert!(run_suite(Suite::All, 40).is_err());
    }
}
