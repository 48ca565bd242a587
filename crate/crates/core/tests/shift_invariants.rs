use std::collections::BTreeSet;

use gibbsloss_core::fixtures;
use gibbsloss_core::oracle::random_system;
use gibbsloss_core::shift::{self, count_domain_blocks, higher_block_recode, is_mixing, Limits, SystemBundle, Target};
use proptest::prelude::*;

fn image_matches_domain(b: &SystemBundle, n: usize) {
    let lim = Limits::default();
    let domain = shift::blocks(b, n, Target::Domain, &lim).unwrap();
    let from_domain: BTreeSet<Vec<usize>> = domain.iter().map(|w| b.map().apply(w)).collect();
    let image: Vec<Vec<usize>> = shift::blocks(b, n, Target::Image, &lim).unwrap();
    assert_eq!(image, from_domain.iter().cloned().collect::<Vec<_>>());
    for w in &image {
        let mut fib = shift::fiber(b, w, &lim).unwrap();
        let mut filtered: Vec<Vec<usize>> = domain.iter().filter(|x| &b.map().apply(x) == w).cloned().collect();
        fib.sort();
        filtered.sort();
        assert!(!fib.is_empty());
        assert_eq!(fib, filtered);
    }
}

#[test]
fn fixture_fibers_match_filtered_blocks() {
    for (_, b) in fixtures::all() {
        for n in 1..=7 {
            image_matches_domain(&b, n);
        }
    }
}

#[test]
fn words_off_the_image_have_empty_fibers() {
    let b = fixtures::fig2();
    let lim = Limits::default();
    let image = shift::blocks(&b, 4, Target::Image, &lim).unwrap();
    for w in (0..16u32).map(|m| (0..4).map(|i| (m >> i & 1) as usize).collect::<Vec<_>>()) {
        let empty = shift::fiber(&b, &w, &lim).unwrap().is_empty();
        assert_eq!(empty, !image.contains(&w));
    }
}

/// Entrywise positivity of some power up to the Wielandt bound.
fn primitive_by_powers(m: &[Vec<bool>]) -> bool {
    let n = m.len();
    let bound = (n - 1) * (n - 1) + 1;
    let mut p = m.to_vec();
    for _ in 0..bound {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && m[k][j])).collect())
            .collect();
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn image_blocks_are_labels_of_domain_blocks(seed in 0u64..10_000, n in 1usize..6) {
        image_matches_domain(&random_system(seed), n);
    }

    #[test]
    fn recoding_preserves_block_counts(seed in 0u64..10_000, k in 1usize..4) {
        let b = random_system(seed);
        let r = higher_block_recode(&b, k, &Limits::default()).unwrap();
        for n in 1..=6 {
            prop_assert_eq!(count_domain_blocks(&r.bundle, n), count_domain_blocks(&b, n + k - 1));
        }
    }

    #[test]
    fn mixing_matches_matrix_powers(seed in 0u64..10_000) {
        let b = random_system(seed);
        let (mixing, _) = is_mixing(b.sft());
        prop_assert_eq!(mixing, primitive_by_powers(b.sft().allowed_matrix()));
    }
}
