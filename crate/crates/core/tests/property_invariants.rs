use gibbsloss_core::fixtures;
use gibbsloss_core::oracle::random_system;
use gibbsloss_core::properties::{
    continuing_diagnosis, eresolving_check, fiber_mixing_certificate, nearly_fiber_mixing_verdict, Status,
    Witness,
};
use gibbsloss_core::shift::{self, Limits, SystemBundle, Target};
use gibbsloss_core::transition::{class_degree_estimate, Side, DEFAULT_PHASE_CAP};
use proptest::prelude::*;

/// Literal check over every image 2-block `ab` and every symbol over the
/// fixed end.
fn eresolving_brute(b: &SystemBundle, side: Side) -> Vec<(String, String)> {
    let lim = Limits::default();
    let domain = shift::blocks(b, 2, Target::Domain, &lim).unwrap();
    let mut image: Vec<Vec<usize>> = domain.iter().map(|w| b.map().apply(w)).collect();
    image.sort();
    image.dedup();
    let mut out = Vec::new();
    for ab in &image {
        for e in 0..b.n_symbols() {
            let ok = match side {
                Side::Right => b.label(e) != ab[0] || domain.iter().any(|x| x[0] == e && b.label(x[1]) == ab[1]),
                Side::Left => b.label(e) != ab[1] || domain.iter().any(|x| x[1] == e && b.label(x[0]) == ab[0]),
            };
            if !ok {
                out.push((b.show_label(ab), b.symbols().name(e).to_string()));
            }
        }
    }
    out
}

fn assert_eresolving(b: &SystemBundle) {
    for side in [Side::Right, Side::Left] {
        let v = eresolving_check(b, side).unwrap();
        let want = eresolving_brute(b, side);
        match v.witness {
            Witness::ExtensionFailures { failures } => assert_eq!(failures, want),
            _ => {
                assert!(want.is_empty());
                assert_eq!(v.status, Status::Holds);
            }
        }
    }
}

fn flips(a: Status, b: Status) -> bool {
    matches!((a, b), (Status::Holds, Status::Fails) | (Status::Fails, Status::Holds))
}

/// Statuses at growing horizons never switch between holds and fails, and
/// the implications between the properties hold at every horizon.
fn assert_horizon_consistency(b: &SystemBundle, horizons: &[usize]) {
    let lim = Limits::default();
    let mut prev: Option<Vec<Status>> = None;
    for &h in horizons {
        let fm = fiber_mixing_certificate(b, h, DEFAULT_PHASE_CAP, &lim).unwrap();
        let nfm = nearly_fiber_mixing_verdict(b, h, h, DEFAULT_PHASE_CAP, &lim).unwrap();
        let cont = continuing_diagnosis(b, h, h, DEFAULT_PHASE_CAP, &lim).unwrap();
        if fm.status == Status::Holds {
            assert_eq!(nfm.verdict.status, Status::Holds);
            assert_eq!(class_degree_estimate(b, h, &lim).unwrap().value, 1);
        }
        if nfm.verdict.status == Status::Holds {
            // counts may differ between points (the bundled nearly
            // fiber-mixing example is not class-closing), but not between sides
            assert!(nfm.continuing.battery.entries.iter().all(|e| e.right == e.left));
        }
        let now = vec![fm.status, nfm.verdict.status, cont.right.status, cont.left.status];
        if let Some(p) = &prev {
            for (a, c) in p.iter().zip(&now) {
                assert!(!flips(*a, *c), "status flipped at horizon {h}");
            }
        }
        prev = Some(now);
    }
}

#[test]
fn fixture_eresolving_matches_brute_force() {
    for (_, b) in fixtures::all() {
        assert_eresolving(&b);
    }
}

#[test]
fn fixture_horizon_consistency() {
    for (_, b) in fixtures::all() {
        assert_horizon_consistency(&b, &[3, 4, 5]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_eresolving_matches_brute_force(seed in 0u64..10_000) {
        assert_eresolving(&random_system(seed));
    }

    #[test]
    fn random_horizon_consistency(seed in 0u64..10_000) {
        assert_horizon_consistency(&random_system(seed), &[3, 4]);
    }
}
