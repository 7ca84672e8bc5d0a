use std::fmt;
use std::str::FromStr;

use super::{
    collapse_stars, expand_stars, ok_forward, ok_inverse, star_decode, star_encode, PermList,
};
use crate::error::{Error, Result};
use crate::perm::{fast_35241ok, Permutation};

/// `(rho, v)`: `rho` is OK of length `k - 1` and `v` is a `k`-list of
/// (possibly empty) OK permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenPair {
    pub rho: Permutation,
    pub lists: PermList,
}

impl EigenPair {
    pub fn k(&self) -> usize {
        self.lists.len()
    }

    /// Length of the permutation this pair encodes.
    pub fn n(&self) -> usize {
        self.k() + self.lists.total_len()
    }
}

impl fmt::Display for EigenPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.rho, self.lists)
    }
}

impl FromStr for EigenPair {
    type Err = Error;

    /// `rho ; item / item / ...`, with `()` for an empty permutation.
    fn from_str(s: &str) -> Result<Self> {
        let (rho, lists) = s
            .split_once(';')
            .ok_or_else(|| Error::invalid("expected \"rho ; list\""))?;
        Ok(EigenPair {
            rho: rho.parse()?,
            lists: lists.parse()?,
        })
    }
}

/// From a 3(5)241-OK permutation of length `n` to an [`EigenPair`] with
/// `k = 1 + |tau|`, where `tau` follows the maximum.
pub fn eigen_forward(p: &Permutation) -> Result<EigenPair> {
    let (rho, starred) = star_encode(p)?;
    let k = rho.len() + 1;
    if starred.base().is_empty() {
        return Ok(EigenPair {
            rho,
            lists: PermList(vec![Permutation::empty(); k]),
        });
    }
    let (marked, bits) = collapse_stars(&starred)?;
    let nonempty = ok_forward(&marked)?;
    let mut items = nonempty.0.into_iter();
    let lists = bits
        .iter()
        .map(|&bit| {
            if bit {
                items.next().expect("one item per set bit")
            } else {
                Permutation::empty()
            }
        })
        .collect();
    Ok(EigenPair {
        rho,
        lists: PermList(lists),
    })
}

/// Inverse of [`eigen_forward`].
pub fn eigen_inverse(pair: &EigenPair) -> Result<Permutation> {
    let k = pair.k();
    if k == 0 || pair.rho.len() + 1 != k {
        return Err(Error::invalid(format!(
            "rho of length {} needs a list of {} items, got {}",
            pair.rho.len(),
            pair.rho.len() + 1,
            k
        )));
    }
    for q in std::iter::once(&pair.rho).chain(pair.lists.items()) {
        if !q.is_standard() || !fast_35241ok(q) {
            return Err(Error::invalid(format!(
                "{} is not a standard 3(5)241-OK permutation",
                q
            )));
        }
    }
    let bits: Vec<bool> = pair.lists.items().iter().map(|q| !q.is_empty()).collect();
    if !bits.contains(&true) {
        let mut w = vec![k as u32];
        w.extend_from_slice(pair.rho.entries());
        return Ok(Permutation::from_vec_unchecked(w));
    }
    let nonempty = PermList(
        pair.lists
            .items()
            .iter()
            .filter(|q| !q.is_empty())
            .cloned()
            .collect(),
    );
    let marked = ok_inverse(&nonempty)?;
    let starred = expand_stars(&marked, &bits)?;
    star_decode(&pair.rho, &starred)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let pi = p("2 8 3 1 11 4 6 5 13 7 15 9 10 14 12");
        let pair = eigen_forward(&pi).unwrap();
        assert_eq!(pair.k(), 5);
        assert_eq!(pair.rho, p("1 2 4 3"));
        assert_eq!(pair.n(), 15);
        assert_eq!(pair.lists.total_len(), 10);
        assert_eq!(eigen_inverse(&pair).unwrap(), pi);
    }

    #[test]
    fn smallest_cases() {
        let pair = eigen_forward(&p("1")).unwrap();
        assert!(pair.rho.is_empty());
        assert_eq!(pair.lists, PermList(vec![Permutation::empty()]));
        assert_eq!(eigen_inverse(&pair).unwrap(), p("1"));

        let pair = eigen_forward(&p("3 1 2")).unwrap();
        assert_eq!(pair.to_string(), "1 2 ; () / () / ()");
        assert_eq!(eigen_inverse(&pair).unwrap(), p("3 1 2"));
    }

    #[test]
    fn text_form() {
        let pair: EigenPair = "1 2 ; () / 1 / ()".parse().unwrap();
        assert_eq!(pair.k(), 3);
        assert_eq!(pair.to_string(), "1 2 ; () / 1 / ()");
        assert!("1 2".parse::<EigenPair>().is_err());
    }

    #[test]
    fn rejects_malformed_pairs() {
        assert!(eigen_forward(&p("3 2 4 1")).is_err());
        assert!(eigen_inverse(&"1 ; ()".parse().unwrap()).is_err());
        assert!(eigen_inverse(&"() ; 3 2 4 1".parse().unwrap()).is_err());
    }
}
