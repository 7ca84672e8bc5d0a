//! Round trips at sizes beyond exhaustive reach, built from random lists of
//! small pieces.

use std::sync::OnceLock;

use proptest::prelude::*;

use eigenperm::bijection::{
    eigen_forward, eigen_inverse, ok_forward, ok_inverse, window_forward, window_inverse,
    EigenPair, PermList,
};
use eigenperm::perm::fast_35241ok;
use eigenperm::verify::{avoiders_321, ok_permutations};
use eigenperm::Permutation;

const PIECE_MAX: usize = 6;

fn avoiders() -> &'static Vec<Vec<Permutation>> {
    static CELL: OnceLock<Vec<Vec<Permutation>>> = OnceLock::new();
    CELL.get_or_init(|| (0..=PIECE_MAX).map(avoiders_321).collect())
}

fn oks() -> &'static Vec<Vec<Permutation>> {
    static CELL: OnceLock<Vec<Vec<Permutation>>> = OnceLock::new();
    CELL.get_or_init(|| (0..=PIECE_MAX).map(ok_permutations).collect())
}

fn pick(table: &[Vec<Permutation>], len: usize, idx: usize) -> Permutation {
    let pool = &table[len];
    pool[idx % pool.len()].clone()
}

fn pieces(min_len: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((min_len..=PIECE_MAX, any::<usize>()), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn window_round_trip_from_lists(spec in pieces(1)) {
        let v = PermList(spec.iter().map(|&(l, i)| pick(avoiders(), l, i)).collect());
        let q = window_inverse(&v).unwrap();
        prop_assert_eq!(q.len(), v.total_len());
        prop_assert_eq!(q.k(), v.len());
        prop_assert_eq!(window_forward(&q).unwrap(), v);
    }

    #[test]
    fn ok_round_trip_from_lists(spec in pieces(1)) {
        let v = PermList(spec.iter().map(|&(l, i)| pick(oks(), l, i)).collect());
        let q = ok_inverse(&v).unwrap();
        prop_assert!(fast_35241ok(q.base()));
        prop_assert_eq!(ok_forward(&q).unwrap(), v);
    }

    #[test]
    fn eigen_round_trip_from_pairs(spec in pieces(0), rho_idx in any::<usize>()) {
        let lists = PermList(spec.iter().map(|&(l, i)| pick(oks(), l, i)).collect());
        let k = lists.len();
        prop_assume!(k - 1 <= PIECE_MAX);
        let pair = EigenPair { rho: pick(oks(), k - 1, rho_idx), lists };
        let p = eigen_inverse(&pair).unwrap();
        prop_assert!(fast_35241ok(&p));
        prop_assert_eq!(p.len(), pair.n());
        prop_assert_eq!(eigen_forward(&p).unwrap(), pair);
    }
}
