use gibbsloss_core::fixtures;
use gibbsloss_core::graph;
use gibbsloss_core::oracle::{brute_depth, brute_tau, random_system};
use gibbsloss_core::properties::periodic_points;
use gibbsloss_core::reproduce::{check_inequalities, recurrent_tau};
use gibbsloss_core::shift::{self, Limits, SystemBundle, Target};
use gibbsloss_core::transition::{bridges, depth, periodic_classes, tau_depth, Side, DEFAULT_PHASE_CAP};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn fixture_inequalities() {
    for (name, b) in fixtures::all() {
        let (count, violation) = check_inequalities(&b, 6).unwrap();
        assert!(count > 0);
        assert_eq!(violation, None, "{name}");
    }
}

#[test]
fn recurrent_degree_identity() {
    for (name, u) in [("FIG1", "a"), ("FIG2", "0"), ("FIG3", "3"), ("FIG4", "a")] {
        let b = fixtures::all().into_iter().find(|(n, _)| *n == name).unwrap().1;
        let u = b.parse_label_word(u).unwrap();
        let classes = periodic_classes(&b, &u, Side::Right, DEFAULT_PHASE_CAP).unwrap();
        let (t, stable) = recurrent_tau(&b, &u, 12).unwrap();
        assert!(stable, "{name}");
        assert_eq!((classes.classes.len(), t), (2, 2), "{name}");
    }
}

/// Classes partition their vertices into mutually reachable groups, and
/// vertices of distinct classes are never mutually reachable.
fn assert_class_equivalence(b: &SystemBundle, u: &[usize]) {
    for side in [Side::Right, Side::Left] {
        let r = periodic_classes(b, u, side, DEFAULT_PHASE_CAP).unwrap();
        let g = r.graph();
        let ids: Vec<Vec<usize>> = r
            .classes
            .iter()
            .map(|c| c.vertices.iter().map(|&(i, a)| g.id(i, a)).collect())
            .collect();
        for (ci, vs) in ids.iter().enumerate() {
            for &v in vs {
                let fwd = graph::reachable(g.adjacency(), [v]);
                for (cj, ws) in ids.iter().enumerate() {
                    for &w in ws {
                        let back = graph::reachable(g.adjacency(), [w]);
                        let mutual = fwd[w] && back[v];
                        assert_eq!(mutual, ci == cj);
                    }
                }
            }
        }
    }
}

#[test]
fn fixture_classes_are_equivalence_classes() {
    for (_, b) in fixtures::all() {
        for u in periodic_points(&b, 3, &Limits::default()).unwrap() {
            assert_class_equivalence(&b, &u);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_inequalities(seed in 0u64..10_000) {
        let (_, violation) = check_inequalities(&random_system(seed), 5).unwrap();
        prop_assert_eq!(violation, None);
    }

    #[test]
    fn random_classes_are_equivalence_classes(seed in 0u64..10_000) {
        let b = random_system(seed);
        for u in periodic_points(&b, 2, &Limits::default()).unwrap() {
            assert_class_equivalence(&b, &u);
        }
    }

    #[test]
    fn depth_and_tau_match_enumeration(seed in 0u64..10_000, n in 3usize..7) {
        let b = random_system(seed);
        let lim = Limits::default();
        for w in shift::blocks(&b, n, Target::Image, &lim).unwrap() {
            if shift::fiber(&b, &w, &lim).unwrap().len() > 8 {
                continue;
            }
            prop_assert_eq!(depth(&b, &w).unwrap(), brute_depth(&b, &w, &lim).unwrap());
            prop_assert_eq!(tau_depth(&b, &w).unwrap().value, brute_tau(&b, &w, &lim).unwrap());
        }
    }

    #[test]
    fn bridges_factor_through_endpoints(seed in 0u64..10_000, n in 2usize..7, pick in any::<u64>()) {
        let b = random_system(seed);
        let lim = Limits::default();
        let image = shift::blocks(&b, n, Target::Image, &lim).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let w = &image[rng.gen_range(0..image.len())];
        let fib = shift::fiber(&b, w, &lim).unwrap();
        let last = n - 1;
        for _ in 0..16 {
            let x = &fib[rng.gen_range(0..fib.len())];
            let y = &fib[rng.gen_range(0..fib.len())];
            let base = bridges(&b, x, y).unwrap();
            let x2 = fib.iter().filter(|z| z[0] == x[0] && z[last] == x[last]);
            for x2 in x2.take(4) {
                for y2 in fib.iter().filter(|z| z[0] == y[0] && z[last] == y[last]).take(4) {
                    prop_assert_eq!(bridges(&b, x2, y2).unwrap(), base);
                }
            }
        }
    }
}
