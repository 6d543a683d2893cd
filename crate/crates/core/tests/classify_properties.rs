use lbc_core::classify::{build_classifier, Classifier, Strategy, Verdict};
use lbc_core::{BitVector, ClassPair, SearchConfig, SymmetricClass, WeightSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = 28;

fn expected(c: &Classifier, x: &BitVector) -> Option<Verdict> {
    if c.pair.first().contains(x) {
        Some(Verdict::Class1)
    } else if c.pair.second().contains(x) {
        Some(Verdict::Class2)
    } else {
        None
    }
}

fn random_pair(rng: &mut impl Rng, n: usize) -> ClassPair {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for w in 0..=n {
        match rng.gen_range(0..4) {
            0 => first.push(w),
            1 => second.push(w),
            _ => {}
        }
    }
    if first.is_empty() {
        first.push(0);
        second.retain(|&w| w != 0);
    }
    ClassPair::new(
        SymmetricClass::new(WeightSet::from_weights(n, first).unwrap()),
        SymmetricClass::new(WeightSet::from_weights(n, second).unwrap()),
    )
    .unwrap()
}

#[test]
fn exhaustive_decoding_small_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = SearchConfig::default();
    for _ in 0..30 {
        let n = rng.gen_range(1..=12);
        let pair = random_pair(&mut rng, n);
        let mut ranks = Vec::new();
        for strategy in [Strategy::Exact, Strategy::Greedy, Strategy::ZeroPad] {
            let c = build_classifier(&pair, strategy, &cfg).unwrap();
            assert!(c.validate(CAP).unwrap());
            assert_eq!(c.rank, n - c.kernel().dim());
            if c.rank == 0 {
                // nothing to measure: only one class can be nonempty
                assert!(c.pair.first().weights().is_empty() || c.pair.second().weights().is_empty());
                ranks.push(0);
                continue;
            }
            for x in (0u64..1 << n).map(|v| BitVector::from_u64(n, v).unwrap()) {
                if let Some(want) = expected(&c, &x) {
                    assert_eq!(c.classify_point(&c.measure(&x).unwrap(), CAP).unwrap(), want);
                }
            }
            ranks.push(c.rank);
        }
        assert!(ranks[0] <= ranks[1] && ranks[0] <= ranks[2], "{ranks:?}");
    }
}

#[test]
fn sampled_decoding_medium_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = SearchConfig::default();
    let mut checked = 0;
    for n in 13..=20 {
        // small balls keep the forbidden set narrow, so the kernel stays enumerable
        let s = 1 + n % 3;
        let pair =
            ClassPair::new(SymmetricClass::ball_at_zero(n, s).unwrap(), SymmetricClass::ball_at_ones(n, s).unwrap())
                .unwrap();
        let c = build_classifier(&pair, Strategy::Greedy, &cfg).unwrap();
        assert!(c.validate(CAP).unwrap());
        while checked < (n - 12) * 12_500 {
            // sample from the classes directly, half from each side
            let mut x = BitVector::zeros(n).unwrap();
            for _ in 0..rng.gen_range(0..=s) {
                x.set(rng.gen_range(0..n), true);
            }
            if rng.gen() {
                x = x.xor(&BitVector::ones(n).unwrap());
            }
            let want = expected(&c, &x).unwrap();
            assert_eq!(c.classify_point(&c.measure(&x).unwrap(), CAP).unwrap(), want);
            checked += 1;
        }
    }
    assert_eq!(checked, 100_000);
}

#[test]
fn non_separating_matrix_is_rejected() {
    let pair = ClassPair::new(SymmetricClass::exact_weight(6, 1).unwrap(), SymmetricClass::exact_weight(6, 3).unwrap())
        .unwrap();
    let c = Classifier::from_matrix(pair, lbc_core::BitMatrix::zeros(1, 6).unwrap(), Strategy::Exact).unwrap();
    assert!(!c.validate(CAP).unwrap());
}
