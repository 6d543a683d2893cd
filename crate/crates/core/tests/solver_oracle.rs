mod common;

use std::sync::OnceLock;

use lbc_core::bounds::floor_log2;
use lbc_core::sets::weight_set_size;
use lbc_core::solver::{build_table, check_relations};
use lbc_core::{max_avoiding_subspace, verify_avoiding, SearchConfig, Solver, WeightSet};
use proptest::prelude::*;

fn subspaces(n: usize) -> &'static [(usize, u64)] {
    static CACHE: OnceLock<Vec<Vec<(usize, u64)>>> = OnceLock::new();
    &CACHE.get_or_init(|| (0..=8).map(common::all_subspaces).collect())[n]
}

fn weight_set_from_mask(n: usize, mask: u64) -> WeightSet {
    WeightSet::from_weights(n, (0..=n).filter(|&w| mask >> w & 1 == 1)).unwrap()
}

#[test]
fn oracle_enumerates_every_subspace() {
    for n in 1..=8 {
        assert_eq!(subspaces(n).len() as u64, common::subspace_count(n));
    }
}

#[test]
fn solver_matches_oracle_on_all_annuli() {
    let cfg = SearchConfig::default();
    for n in 1..=8 {
        for a in 1..=n {
            for b in a..=n {
                let f = WeightSet::interval(a, b, n).unwrap();
                let res = max_avoiding_subspace(&f, n, &cfg).unwrap();
                let expected = common::oracle_k(subspaces(n), common::interval_mask(a, b));
                assert_eq!(res.k, expected, "a={a} b={b} n={n}");
                assert!(res.is_optimal());
                assert!(verify_avoiding(&res.witness, &f, 28).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]
    #[test]
    fn solver_matches_oracle_on_arbitrary_weight_sets(n in 1usize..=8, raw in any::<u64>()) {
        // weight 0 is never forbidden
        let mask = raw & ((1u64 << (n + 1)) - 2);
        let f = weight_set_from_mask(n, mask);
        let res = max_avoiding_subspace(&f, n, &SearchConfig::default()).unwrap();
        prop_assert_eq!(res.k, common::oracle_k(subspaces(n), mask));
        prop_assert!(verify_avoiding(&res.witness, &f, 28).unwrap());
    }

    #[test]
    fn enlarging_the_forbidden_set_never_helps(n in 2usize..=10, raw in any::<u64>(), extra in 1usize..=10) {
        let mask = raw & ((1u64 << (n + 1)) - 2);
        let small = weight_set_from_mask(n, mask);
        let big = weight_set_from_mask(n, mask | 1 << (1 + extra % n));
        let cfg = SearchConfig::default();
        let k_small = max_avoiding_subspace(&small, n, &cfg).unwrap().k;
        let k_big = max_avoiding_subspace(&big, n, &cfg).unwrap().k;
        prop_assert!(k_big <= k_small);
    }
}

#[test]
fn k_grows_with_n_for_fixed_interval() {
    let solver = Solver::new(SearchConfig::default());
    for n in 1..10 {
        for a in 1..=n {
            for b in a..=n {
                let k = solver.m_star(a, b, n).unwrap().k;
                let k_next = solver.m_star(a, b, n + 1).unwrap().k;
                assert!(k_next >= k, "a={a} b={b} n={n}");
            }
        }
    }
}

#[test]
fn counting_lower_bound_on_k() {
    let solver = Solver::new(SearchConfig::default());
    for n in 1..=10 {
        for a in 1..=n {
            for b in a..=n {
                let f = WeightSet::interval(a, b, n).unwrap();
                let k = solver.solve(&f).unwrap().k;
                let floor = floor_log2(&weight_set_size(&f));
                assert!(k + floor + 1 >= n, "a={a} b={b} n={n} k={k}");
            }
        }
    }
}

#[test]
fn values_do_not_depend_on_worker_count() {
    let serial = SearchConfig::default();
    let parallel = SearchConfig::default().with_workers(4);
    for n in 1..=10 {
        for a in 1..=n {
            for b in a..=n {
                let f = WeightSet::interval(a, b, n).unwrap();
                let r1 = max_avoiding_subspace(&f, n, &serial).unwrap();
                let r4 = max_avoiding_subspace(&f, n, &parallel).unwrap();
                assert_eq!((r1.k, r1.m_star), (r4.k, r4.m_star), "a={a} b={b} n={n}");
                assert!(verify_avoiding(&r4.witness, &f, 28).unwrap());
                // sequential witnesses are reproducible
                assert_eq!(r1.witness, max_avoiding_subspace(&f, n, &serial).unwrap().witness);
            }
        }
    }
}

#[test]
fn relations_over_n_up_to_9() {
    let solver = Solver::new(SearchConfig::default());
    let table = build_table(1..=9, 1..=9, 1..=9, &solver).unwrap();
    let report = check_relations(&table).unwrap();
    assert!(report.is_clean(), "{:?}", report.violations);
    assert_eq!(report.checked, table.len());
}
