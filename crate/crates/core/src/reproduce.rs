//! End-to-end reproduction of the four bundled examples plus the oracle and
//! inequality suites. Each criterion returns a pass/fail outcome with a
//! short detail line; nothing here panics on a failed check.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::fixtures;
use crate::measure::diagnose::{obstruction_diagnose, DiagnoseOptions, Verdict};
use crate::measure::growth::growth_profile;
use crate::measure::markov::{validate_markov, MarkovMeasure, RawMeasure};
use crate::measure::pushforward::{pushforward, Mode};
use crate::measure::series::gibbs_ratio_series;
use crate::oracle;
use crate::properties::{
    eresolving_check, fiber_mixing_certificate, nearly_fiber_mixing_verdict, Status, Witness,
};
use crate::shift::{self, Limits, SystemBundle, Target};
use crate::transition::classes::{periodic_classes, DEFAULT_PHASE_CAP};
use crate::transition::{class_degree_estimate, depth, tau_depth, Side};

/// Number of seeded random systems in the oracle and inequality suites.
pub const RANDOM_CORPUS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
    pub budget_ms: Option<f64>,
}

type Check = fn() -> Result<(bool, String)>;

const CRITERIA: [(&str, Check, Option<u64>); 8] = [
    ("FIG2 ratio reproduction", fig2_ratios, Some(1)),
    ("FIG1 polynomial signature", fig1_polynomial, Some(2)),
    ("FIG3 vanishing ratio", fig3_vanishing, Some(1)),
    ("FIG4 verdicts", fig4_verdicts, Some(2)),
    ("class-structure reproduction", class_structure, None),
    ("oracle equivalence", oracle_equivalence, Some(60)),
    ("inequality suite", inequality_suite, None),
    ("numerical hygiene", numerical_hygiene, None),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize) -> CriterionOutcome {
    let (name, check, budget) = CRITERIA[id - 1];
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = budget {
        if elapsed > Duration::from_secs(b) {
            passed = false;
            detail = format!("{detail}; over the {b} s budget");
        }
    }
    CriterionOutcome {
        id,
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms: elapsed.as_secs_f64() * 1e3,
        budget_ms: budget.map(|b| b as f64 * 1e3),
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    (1..=CRITERIA.len()).map(run_criterion).collect()
}

/// One line per criterion.
pub fn render(outcomes: &[CriterionOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&format!(
            "[{}] {}. {} ({:.0} ms): {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed_ms,
            o.detail
        ));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    s.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    s
}

/// FIG2 measure with crossing probability `p` out of `e` and `g`.
pub fn fig2_measure(bundle: &SystemBundle, p: f64) -> Result<MarkovMeasure<f64>> {
    let json = format!(
        r#"{{"matrix": {{"e": {{"e": {q}, "f": {p}}}, "f": {{"g": 1.0}}, "g": {{"e": {q}, "f": {p}}}}}}}"#,
        q = 1.0 - p
    );
    validate_markov(bundle, &RawMeasure::from_json(&json)?)
}

fn measure(bundle: &SystemBundle, json: &str) -> Result<MarkovMeasure<f64>> {
    validate_markov(bundle, &RawMeasure::from_json(json)?)
}

/// Fixture systems paired with their measures and periodic points.
fn fixture_cases() -> Result<Vec<(&'static str, SystemBundle, MarkovMeasure<f64>, Vec<usize>)>> {
    let f1 = fixtures::fig1();
    let f2 = fixtures::fig2();
    let f3 = fixtures::fig3();
    let f4 = fixtures::fig4();
    let (m1, m2, m3, m4) = (
        measure(&f1, fixtures::FIG1_MEASURE_JSON)?,
        measure(&f2, fixtures::FIG2_P03_JSON)?,
        measure(&f3, fixtures::FIG3_MEASURE_JSON)?,
        measure(&f4, fixtures::FIG4_UNIFORM_JSON)?,
    );
    let (u1, u2, u3, u4) = (
        f1.parse_label_word("a")?,
        f2.parse_label_word("0")?,
        f3.parse_label_word("3")?,
        f4.parse_label_word("a")?,
    );
    Ok(vec![
        ("FIG1", f1, m1, u1),
        ("FIG2", f2, m2, u2),
        ("FIG3", f3, m3, u3),
        ("FIG4", f4, m4, u4),
    ])
}

fn fig2_ratios() -> Result<(bool, String)> {
    let b = fixtures::fig2();
    let u = b.parse_label_word("0")?;
    let mut worst = 0f64;
    let mut verdicts = Vec::new();
    for p in [0.2, 0.3, 0.8] {
        let mu = fig2_measure(&b, p)?;
        let s = gibbs_ratio_series(&b, &mu, &u, 60)?;
        for m in 5..=50 {
            let want = if m % 2 == 1 { (1.0 + p) / 2.0 } else { 2.0 * p / (1.0 + p) };
            let got = s.ratio_at(m).unwrap_or(f64::NAN);
            worst = worst.max((got - want).abs());
        }
        verdicts.push(obstruction_diagnose(&b, &mu, &u, &DiagnoseOptions::default())?.verdict);
    }
    let ok = worst <= 1e-10 && verdicts.iter().all(|&v| v == Verdict::PeriodReduction);
    Ok((
        ok,
        format!(
            "max ratio error {worst:.2e}; verdicts {}",
            verdicts.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
        ),
    ))
}

fn fig1_polynomial() -> Result<(bool, String)> {
    let b = fixtures::fig1();
    let mu = measure(&b, fixtures::FIG1_MEASURE_JSON)?;
    let limits = Limits::default();
    // explicit enumeration while the fiber is small, plain products beyond
    let mut constants = Vec::new();
    for n in 1..=30usize {
        let w = vec![0usize; n];
        let value = if n <= 16 {
            pushforward(&b, &mu, &w, Mode::Brute, &limits)?.value
        } else {
            oracle::product_cylinder(&b, &mu, &w)
        };
        constants.push(value / ((n as f64 + 2.0) * 0.5f64.powi(n as i32)));
    }
    let c = constants[0];
    let dev = constants.iter().fold(0f64, |m, &k| m.max((k / c - 1.0).abs()));
    let report = obstruction_diagnose(&b, &mu, &[0], &DiagnoseOptions::default())?;
    let (lambda, alpha) = report
        .polynomial
        .as_ref()
        .map_or((f64::NAN, f64::NAN), |e| (e.lambda, e.alpha));
    let ok = dev <= 1e-12
        && (lambda - 0.5).abs() <= 1e-6
        && (0.8..=1.2).contains(&alpha)
        && report.verdict == Verdict::TransitionalPolynomial;
    Ok((
        ok,
        format!(
            "c = {c:.6}, max relative deviation {dev:.2e}; lambda = {lambda:.9}, alpha = {alpha:.4}; verdict {}",
            report.verdict.as_str()
        ),
    ))
}

fn fig3_vanishing() -> Result<(bool, String)> {
    let b = fixtures::fig3();
    let mu = measure(&b, fixtures::FIG3_MEASURE_JSON)?;
    let u = b.parse_label_word("3")?;
    let two = b.parse_label_word("2")?[0];
    let report = obstruction_diagnose(&b, &mu, &u, &DiagnoseOptions::default())?;
    let Some(e) = report
        .vanishing
        .iter()
        .find(|e| e.side == Side::Right && e.delta == two)
    else {
        return Ok((false, "no right series for delta = 2".into()));
    };
    // series[n - 1] = nu[3^n 2] / nu[3^(n+1)]
    let s = &e.series;
    let positive = s.iter().all(|&x| x > 0.0);
    let decreasing = (5..s.len()).all(|n| s[n] < s[n - 1]);
    let quotient = s[39] / s[38];
    let eres = eresolving_check(&b, Side::Right)?;
    let witness = match &eres.witness {
        Witness::ExtensionFailures { failures } => failures.contains(&("32".to_string(), "e".to_string())),
        _ => false,
    };
    let ok = positive
        && decreasing
        && (quotient - 1.0 / 3.0).abs() <= 0.05
        && report.verdict == Verdict::ContinuingVanishing
        && eres.status == Status::Fails
        && witness;
    Ok((
        ok,
        format!(
            "positive {positive}, decreasing from n = 5 {decreasing}, quotient at n = 40 {quotient:.6}; verdict {}; right eresolving {} (32, e) listed {witness}",
            report.verdict.as_str(),
            eres.status.as_str()
        ),
    ))
}

fn fig4_verdicts() -> Result<(bool, String)> {
    let b = fixtures::fig4();
    let limits = Limits::default();
    let nfm = nearly_fiber_mixing_verdict(&b, 6, 6, DEFAULT_PHASE_CAP, &limits)?;
    let subs_hold = nfm.bi_continuing == Status::Holds
        && nfm.period_preservation.status == Status::Holds
        && nfm.transition_free.status == Status::Holds
        && nfm.verdict.status == Status::Holds;
    let fm = fiber_mixing_certificate(&b, 6, DEFAULT_PHASE_CAP, &limits)?;
    let fm_ok = fm.status == Status::Fails
        && matches!(&fm.witness, Witness::ManyClasses { point, classes: 2, .. } if point == "(a)^inf");
    let degree = class_degree_estimate(&b, 6, &limits)?;
    let mu = measure(&b, fixtures::FIG4_UNIFORM_JSON)?;
    let u = b.parse_label_word("a")?;
    let diag = obstruction_diagnose(&b, &mu, &u, &DiagnoseOptions::default())?;
    let ok = subs_hold
        && fm_ok
        && degree.value == 1
        && degree.stabilized
        && mu.fully_supported
        && diag.verdict == Verdict::NoneFoundAtHorizon;
    Ok((
        ok,
        format!(
            "nearly fiber-mixing {} (sub-verdicts hold {subs_hold}); fiber-mixing {} via (a)^inf {fm_ok}; degree {} stabilized {}; diagnose {}",
            nfm.verdict.status.as_str(),
            fm.status.as_str(),
            degree.value,
            degree.stabilized,
            diag.verdict.as_str()
        ),
    ))
}

fn class_structure() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, b, _, u) in fixture_cases()? {
        let r = periodic_classes(&b, &u, Side::Right, DEFAULT_PHASE_CAP)?;
        let nonstop = r.nonstop.iter().filter(|&&x| x).count();
        let this = match name {
            "FIG1" => r.classes.len() == 2 && r.transitions.len() == 1 && nonstop == 1,
            "FIG2" => r.classes.len() == 2 && r.classes.iter().all(|c| c.period == 2) && r.transitions.is_empty(),
            "FIG3" => r.classes.len() == 2,
            _ => r.classes.len() == 2 && r.transitions.is_empty(),
        };
        ok &= this;
        parts.push(format!(
            "{name} {}: {} classes, transitions {} ({nonstop} nonstop)",
            b.show_label(&u),
            r.classes.len(),
            r.transitions.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn oracle_equivalence() -> Result<(bool, String)> {
    let limits = Limits::default();
    let mut worst = 0f64;
    let mut words = 0usize;
    let mut small = 0usize;
    let mut mismatches = Vec::new();
    for seed in 0..RANDOM_CORPUS {
        let b = oracle::random_system(seed);
        let mu = oracle::random_measure(&b, seed);
        for n in 1..=7 {
            for w in shift::blocks(&b, n, Target::Image, &limits)? {
                words += 1;
                let t = pushforward(&b, &mu, &w, Mode::Transfer, &limits)?.value;
                let f = pushforward(&b, &mu, &w, Mode::Brute, &limits)?.value;
                worst = worst.max((t - f).abs());
                if oracle::brute_fiber_size(&b, &w, &limits)? > 8 {
                    continue;
                }
                small += 1;
                let tau = tau_depth(&b, &w)?;
                if tau.value != oracle::brute_tau(&b, &w, &limits)? {
                    mismatches.push(format!("seed {seed} tau {}", b.show_label(&w)));
                }
                if n >= 3 && depth(&b, &w)? != oracle::brute_depth(&b, &w, &limits)? {
                    mismatches.push(format!("seed {seed} depth {}", b.show_label(&w)));
                }
            }
        }
    }
    let ok = worst <= 1e-12 && mismatches.is_empty();
    Ok((
        ok,
        format!(
            "{words} words, max |transfer - brute| {worst:.2e}; {small} small fibers, {} depth/tau mismatches{}",
            mismatches.len(),
            mismatches.first().map_or(String::new(), |m| format!(" (first: {m})"))
        ),
    ))
}

/// Checks `tau <= depth` and extension monotonicity for every image word
/// of length at most `max_len`; returns the number of words and the first
/// violation.
pub fn check_inequalities(b: &SystemBundle, max_len: usize) -> Result<(usize, Option<String>)> {
    let limits = Limits::default();
    let mut count = 0;
    let mut tau_of = std::collections::HashMap::new();
    let mut depth_of = std::collections::HashMap::new();
    for n in 1..=max_len {
        for w in shift::blocks(b, n, Target::Image, &limits)? {
            count += 1;
            let t = tau_depth(b, &w)?.value;
            let d = if n >= 3 { Some(depth(b, &w)?.value) } else { None };
            if d.is_some_and(|d| t > d) {
                return Ok((count, Some(format!("tau > depth at {}", b.show_label(&w)))));
            }
            for i in 0..n {
                for j in i + 1..=n {
                    if j - i == n {
                        continue;
                    }
                    let sub = &w[i..j];
                    if tau_of.get(sub).is_some_and(|&ts| t > ts) {
                        return Ok((count, Some(format!("tau grows on extension to {}", b.show_label(&w)))));
                    }
                    if let (Some(d), Some(&ds)) = (d, depth_of.get(sub)) {
                        if d > ds {
                            return Ok((count, Some(format!("depth grows on extension to {}", b.show_label(&w)))));
                        }
                    }
                }
            }
            tau_of.insert(w.clone(), t);
            if let Some(d) = d {
                depth_of.insert(w, d);
            }
        }
    }
    Ok((count, None))
}

/// Minimum of `tau(u^n)` over `n` with `|u^n| <= max_len`, and whether the
/// minimum was reached in the first half of the range.
pub fn recurrent_tau(b: &SystemBundle, u: &[usize], max_len: usize) -> Result<(usize, bool)> {
    let reps = (max_len / u.len()).max(2);
    let mut best = usize::MAX;
    let mut first = 0;
    for n in 1..=reps {
        let w: Vec<usize> = u.iter().copied().cycle().take(n * u.len()).collect();
        let t = tau_depth(b, &w)?.value;
        if t < best {
            best = t;
            first = n;
        }
    }
    Ok((best, first <= reps - reps.div_ceil(2)))
}

fn inequality_suite() -> Result<(bool, String)> {
    let mut total = 0;
    let mut violation = None;
    let cases = fixture_cases()?;
    let corpus = (0..RANDOM_CORPUS).map(oracle::random_system);
    for b in cases.iter().map(|c| c.1.clone()).chain(corpus) {
        let (n, v) = check_inequalities(&b, 6)?;
        total += n;
        if violation.is_none() {
            violation = v;
        }
    }
    let mut degree_ok = true;
    let mut parts = Vec::new();
    for (name, b, _, u) in &cases {
        let classes = periodic_classes(b, u, Side::Right, DEFAULT_PHASE_CAP)?.classes.len();
        let (t, stable) = recurrent_tau(b, u, 12)?;
        degree_ok &= stable && t == classes;
        parts.push(format!("{name} {classes}/{t}"));
    }
    let ok = violation.is_none() && degree_ok;
    Ok((
        ok,
        format!(
            "{total} words checked, {}; classes vs min tau(u^n): {}",
            violation.as_deref().unwrap_or("no violations"),
            parts.join(", ")
        ),
    ))
}

fn numerical_hygiene() -> Result<(bool, String)> {
    let limits = Limits::default();
    let mut worst_residual = 0f64;
    let mut worst_mass = 0f64;
    let mut cases = fixture_cases()?;
    let f2 = fixtures::fig2();
    let u2 = f2.parse_label_word("0")?;
    for p in [0.2, 0.8] {
        cases.push(("FIG2", f2.clone(), fig2_measure(&f2, p)?, u2.clone()));
    }
    for (_, b, mu, u) in &cases {
        let g = growth_profile(b, mu, u, 60, DEFAULT_PHASE_CAP)?;
        for c in &g.classes {
            worst_residual = worst_residual.max(c.residual);
        }
        for n in 1..=8 {
            let total: f64 = shift::blocks(b, n, Target::Image, &limits)?
                .iter()
                .map(|w| pushforward(b, mu, w, Mode::Transfer, &limits).map(|r| r.value))
                .sum::<Result<f64>>()?;
            worst_mass = worst_mass.max((total - 1.0).abs());
        }
    }
    let ok = worst_residual <= 1e-12 && worst_mass <= 1e-10;
    Ok((
        ok,
        format!("max Perron residual {worst_residual:.2e}; max |sum nu[w] - 1| {worst_mass:.2e}"),
    ))
}
