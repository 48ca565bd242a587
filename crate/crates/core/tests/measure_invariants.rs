use gibbsloss_core::fixtures;
use gibbsloss_core::measure::{
    growth_profile, obstruction_diagnose, perron, pushforward, validate_markov, DiagnoseOptions, MarkovMeasure, Mode,
    RawMeasure, Verdict,
};
use gibbsloss_core::oracle::{random_measure, random_system};
use gibbsloss_core::properties::periodic_points;
use gibbsloss_core::shift::{self, Limits, SystemBundle, Target};
use gibbsloss_core::transition::DEFAULT_PHASE_CAP;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture_measures() -> Vec<(SystemBundle, MarkovMeasure<f64>)> {
    [
        (fixtures::fig1(), fixtures::FIG1_MEASURE_JSON),
        (fixtures::fig2(), fixtures::FIG2_P03_JSON),
        (fixtures::fig2(), fixtures::FIG2_P05_JSON),
        (fixtures::fig3(), fixtures::FIG3_MEASURE_JSON),
        (fixtures::fig4(), fixtures::FIG4_UNIFORM_JSON),
    ]
    .into_iter()
    .map(|(b, json)| {
        let mu = validate_markov(&b, &RawMeasure::from_json(json).unwrap()).unwrap();
        (b, mu)
    })
    .collect()
}

fn nu(b: &SystemBundle, mu: &MarkovMeasure<f64>, w: &[usize]) -> f64 {
    pushforward(b, mu, w, Mode::Transfer, &Limits::default()).unwrap().value
}

fn assert_consistent(b: &SystemBundle, mu: &MarkovMeasure<f64>, max_len: usize) {
    let lim = Limits::default();
    for n in 1..=max_len {
        let words = shift::blocks(b, n, Target::Image, &lim).unwrap();
        let total: f64 = words.iter().map(|w| nu(b, mu, w)).sum();
        assert!((total - 1.0).abs() <= 1e-10, "mass {total} at n = {n}");
        if n == max_len {
            break;
        }
        for w in &words {
            let here = nu(b, mu, w);
            let mut right = 0.0;
            let mut left = 0.0;
            for l in 0..b.n_labels() {
                let mut wr = w.clone();
                wr.push(l);
                right += nu(b, mu, &wr);
                let mut wl = vec![l];
                wl.extend_from_slice(w);
                left += nu(b, mu, &wl);
            }
            assert!((right - here).abs() <= 1e-12, "Kolmogorov");
            assert!((left - here).abs() <= 1e-12, "shift invariance");
        }
    }
}

fn assert_transfer_matches_brute(b: &SystemBundle, mu: &MarkovMeasure<f64>, max_len: usize) {
    let lim = Limits::default();
    for n in 1..=max_len {
        for w in shift::blocks(b, n, Target::Image, &lim).unwrap() {
            let t = pushforward(b, mu, &w, Mode::Transfer, &lim).unwrap().value;
            let f = pushforward(b, mu, &w, Mode::Brute, &lim).unwrap().value;
            assert!((t - f).abs() <= 1e-12);
        }
    }
}

#[test]
fn fixture_measures_are_consistent() {
    for (b, mu) in fixture_measures() {
        assert_consistent(&b, &mu, 8);
        assert_transfer_matches_brute(&b, &mu, 8);
    }
}

#[test]
fn fixture_growth_converges() {
    for (b, mu) in fixture_measures() {
        for u in periodic_points(&b, 2, &Limits::default()).unwrap() {
            let Ok(g) = growth_profile(&b, &mu, &u, 60, DEFAULT_PHASE_CAP) else {
                continue;
            };
            assert!(g.orbit_consistent);
            for c in &g.classes {
                assert!(c.residual <= 1e-12);
                assert!(c.lambda > 0.0 && c.lambda <= 1.0 + 1e-12);
                assert!(c.k_spread < 1e-6, "K spread {}", c.k_spread);
            }
        }
    }
}

#[test]
fn fixture_verdicts() {
    let expected = [
        (Verdict::TransitionalPolynomial, "a"),
        (Verdict::PeriodReduction, "0"),
        (Verdict::PeriodReduction, "0"),
        (Verdict::ContinuingVanishing, "3"),
        (Verdict::NoneFoundAtHorizon, "a"),
    ];
    for ((b, mu), (verdict, u)) in fixture_measures().into_iter().zip(expected) {
        let u = b.parse_label_word(u).unwrap();
        let r = obstruction_diagnose(&b, &mu, &u, &DiagnoseOptions::default()).unwrap();
        assert_eq!(r.verdict, verdict);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_measures_are_consistent(seed in 0u64..10_000) {
        let b = random_system(seed);
        let mu = random_measure(&b, seed);
        assert_consistent(&b, &mu, 6);
        assert_transfer_matches_brute(&b, &mu, 6);
    }

    #[test]
    fn substochastic_perron(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let row: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
                let s: f64 = row.iter().sum::<f64>() / rng.gen_range(0.2..1.0);
                row.into_iter().map(|x| x / s).collect()
            })
            .collect();
        let p = perron(&m).unwrap();
        prop_assert!(p.residual <= 1e-12);
        prop_assert!(p.lambda > 0.0 && p.lambda <= 1.0 + 1e-12);
    }

    #[test]
    fn identity_map_has_no_obstruction(seed in 0u64..10_000) {
        let b = random_system(seed);
        let id = SystemBundle::identity(b.sft().clone());
        let mu = random_measure(&id, seed);
        for u in periodic_points(&id, 3, &Limits::default()).unwrap() {
            let r = obstruction_diagnose(&id, &mu, &u, &DiagnoseOptions::default()).unwrap();
            prop_assert_eq!(r.verdict, Verdict::NoneFoundAtHorizon);
        }
    }
}
