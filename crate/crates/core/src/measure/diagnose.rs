//! Three numerical signatures that rule out the Gibbs property of a
//! pushforward measure along a periodic point.
//!
//! * period reduction: the ratio `nu[prefix(m + p)] / nu[prefix(m)]` tends
//!   to different limits along different residues of `m`;
//! * transitional polynomial: `nu[u^n]` decays like `n^alpha lambda^n` with
//!   `alpha > 0`, the signature of a transition between classes of equal
//!   rate;
//! * continuing vanishing: `nu[u^n delta] / nu[u^(n+1)]` (or its left
//!   mirror) decays geometrically, violating the uniform lower bound that a
//!   Gibbs measure imposes.
//!
//! A report without any of these is not a Gibbs certificate.

use serde::Serialize;

use crate::error::Result;
use crate::measure::growth::growth_profile;
use crate::measure::linalg;
use crate::measure::markov::MarkovMeasure;
use crate::measure::pushforward::{log_cylinder, prefix_log_cylinders};
use crate::measure::series::periodic_prefix;
use crate::scalar::Scalar;
use crate::shift::SystemBundle;
use crate::transition::classes::{analysis_period, DEFAULT_PHASE_CAP};
use crate::transition::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PeriodReduction,
    TransitionalPolynomial,
    ContinuingVanishing,
    NoneFoundAtHorizon,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::PeriodReduction => "period-reduction",
            Verdict::TransitionalPolynomial => "transitional-polynomial",
            Verdict::ContinuingVanishing => "continuing-vanishing",
            Verdict::NoneFoundAtHorizon => "none-found-at-horizon",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnoseOptions {
    pub n_max: usize,
    pub tol_ratio: f64,
    pub alpha_min: f64,
    pub fit_tol: f64,
    pub decay_margin: f64,
    /// Label symbols to try as deviations; `None` means all.
    pub extensions: Option<Vec<usize>>,
    pub phase_cap: usize,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        DiagnoseOptions {
            n_max: 60,
            tol_ratio: 1e-6,
            alpha_min: 0.5,
            fit_tol: 1e-2,
            decay_margin: 0.05,
            extensions: None,
            phase_cap: DEFAULT_PHASE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodEvidence<T> {
    pub analysis_period: usize,
    /// Tail value of the `|u|`-step ratio for each residue of `m` mod `q`.
    pub limits: Vec<T>,
    /// Max minus min of each residue's ratio over the last quarter.
    pub spreads: Vec<T>,
    pub gap: T,
    pub fired: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreeFit<T> {
    pub log_rate: T,
    pub alpha: T,
    pub intercept: T,
    pub max_residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialEvidence<T> {
    /// Largest class rate, per `|u|` letters.
    pub lambda: T,
    pub alpha: T,
    pub intercept: T,
    pub max_residual: T,
    /// Fit window in periods `n`.
    pub window: (usize, usize),
    pub free_fit: FreeFit<T>,
    pub fired: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingEvidence<T> {
    pub side: Side,
    pub delta: usize,
    /// `s_n` for `n = 1..=n_max`.
    pub series: Vec<T>,
    /// `s_(n+1) / s_n` over the last quarter.
    pub tail_quotients: Vec<T>,
    pub fired: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow<T> {
    pub n: usize,
    pub residue: usize,
    pub log_measure: T,
    pub ratio: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport<T> {
    pub verdict: Verdict,
    pub note: String,
    pub word: Vec<usize>,
    pub n_max: usize,
    pub period_reduction: PeriodEvidence<T>,
    /// `None` when the class rates could not be computed (see `skipped`).
    pub polynomial: Option<PolynomialEvidence<T>>,
    pub vanishing: Vec<VanishingEvidence<T>>,
    pub skipped: Vec<String>,
    /// Single-step series: `nu[prefix(n + 1)] / nu[prefix(n)]`, residue
    /// `n mod q`.
    pub rows: Vec<SeriesRow<T>>,
}

pub fn obstruction_diagnose<T: Scalar>(
    bundle: &SystemBundle,
    mu: &MarkovMeasure<T>,
    u: &[usize],
    options: &DiagnoseOptions,
) -> Result<ObstructionReport<T>> {
    let q = analysis_period(bundle, u, options.phase_cap)?;
    let p = u.len();
    let n_max = options.n_max.max(8);
    let len = p * (n_max + 1) + 1;
    let logs = prefix_log_cylinders(bundle, mu, &periodic_prefix(u, len));
    // log nu[prefix(m)] = logs[m - 1]
    let lc = |m: usize| logs[m - 1];

    let rows = (1..len)
        .map(|m| SeriesRow {
            n: m,
            residue: m % q,
            log_measure: lc(m),
            ratio: (lc(m + 1) - lc(m)).exp(),
        })
        .collect();

    let period_reduction = period_test(&lc, p, q, n_max, options);
    let mut skipped = Vec::new();
    let polynomial = match growth_profile(bundle, mu, u, n_max, options.phase_cap) {
        Ok(g) => {
            let lam_q = g.classes.iter().map(|c| c.lambda).fold(T::zero(), T::max);
            let lambda = lam_q.powf(T::of(p as f64 / q as f64));
            Some(polynomial_test(&lc, p, n_max, lambda, options))
        }
        Err(e) => {
            skipped.push(format!("transitional-polynomial: {e}"));
            None
        }
    };
    let vanishing = vanishing_test(bundle, mu, u, n_max, options);

    let verdict = if period_reduction.fired {
        Verdict::PeriodReduction
    } else if polynomial.as_ref().is_some_and(|e| e.fired) {
        Verdict::TransitionalPolynomial
    } else if vanishing.iter().any(|e| e.fired) {
        Verdict::ContinuingVanishing
    } else {
        Verdict::NoneFoundAtHorizon
    };
    let note = match verdict {
        Verdict::NoneFoundAtHorizon => {
            "no obstruction found at this horizon; this is not a Gibbs certificate".to_string()
        }
        v => format!("{} signature: the pushforward is not Gibbs", v.as_str()),
    };
    Ok(ObstructionReport {
        verdict,
        note,
        word: u.to_vec(),
        n_max,
        period_reduction,
        polynomial,
        vanishing,
        skipped,
        rows,
    })
}

fn period_test<T: Scalar>(
    lc: &impl Fn(usize) -> T,
    p: usize,
    q: usize,
    n_max: usize,
    options: &DiagnoseOptions,
) -> PeriodEvidence<T> {
    let last = p * n_max;
    let mut groups: Vec<Vec<T>> = vec![Vec::new(); q];
    for m in 1..=last {
        groups[m % q].push((lc(m + p) - lc(m)).exp());
    }
    let mut limits = Vec::new();
    let mut spreads = Vec::new();
    for g in &groups {
        let tail = &g[g.len() - (g.len() / 4).max(1)..];
        let lo = tail.iter().copied().fold(T::infinity(), T::min);
        let hi = tail.iter().copied().fold(T::neg_infinity(), T::max);
        limits.push(*tail.last().expect("nonempty"));
        spreads.push(hi - lo);
    }
    let lo = limits.iter().copied().fold(T::infinity(), T::min);
    let hi = limits.iter().copied().fold(T::neg_infinity(), T::max);
    let gap = hi - lo;
    let noise = spreads.iter().copied().fold(T::of(options.tol_ratio), T::max);
    PeriodEvidence {
        analysis_period: q,
        limits,
        spreads,
        gap,
        fired: gap > noise,
    }
}

fn polynomial_test<T: Scalar>(
    lc: &impl Fn(usize) -> T,
    p: usize,
    n_max: usize,
    lambda: T,
    options: &DiagnoseOptions,
) -> PolynomialEvidence<T> {
    let window = (n_max / 2, n_max);
    let ns: Vec<usize> = (window.0..=window.1).collect();
    let ys: Vec<T> = ns.iter().map(|&n| lc(p * n) - T::of(n as f64) * lambda.ln()).collect();
    let xs: Vec<T> = ns.iter().map(|&n| T::of(n as f64).ln()).collect();

    let cols = [xs.clone(), vec![T::one(); xs.len()]];
    let (coef, max_residual) = least_squares(&cols, &ys);
    let (alpha, intercept) = (coef[0], coef[1]);

    let raw: Vec<T> = ns.iter().map(|&n| lc(p * n)).collect();
    let free_cols = [
        ns.iter().map(|&n| T::of(n as f64)).collect(),
        xs,
        vec![T::one(); ns.len()],
    ];
    let (fc, fres) = least_squares(&free_cols, &raw);
    PolynomialEvidence {
        lambda,
        alpha,
        intercept,
        max_residual,
        window,
        free_fit: FreeFit {
            log_rate: fc[0],
            alpha: fc[1],
            intercept: fc[2],
            max_residual: fres,
        },
        fired: alpha > T::of(options.alpha_min) && max_residual < T::of(options.fit_tol),
    }
}

/// Least squares via the normal equations; returns coefficients and the
/// largest absolute residual.
fn least_squares<T: Scalar>(cols: &[Vec<T>], y: &[T]) -> (Vec<T>, T) {
    let k = cols.len();
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |s, (&x, &z)| s + x * z);
    let a: Vec<Vec<T>> = (0..k).map(|i| (0..k).map(|j| dot(&cols[i], &cols[j])).collect()).collect();
    let b: Vec<T> = (0..k).map(|i| dot(&cols[i], y)).collect();
    let coef = linalg::solve(a, b, T::zero()).unwrap_or_else(|| vec![T::nan(); k]);
    let res = (0..y.len()).fold(T::zero(), |m, r| {
        let fit = (0..k).fold(T::zero(), |s, i| s + coef[i] * cols[i][r]);
        m.max((y[r] - fit).abs())
    });
    (coef, res)
}

fn vanishing_test<T: Scalar>(
    bundle: &SystemBundle,
    mu: &MarkovMeasure<T>,
    u: &[usize],
    n_max: usize,
    options: &DiagnoseOptions,
) -> Vec<VanishingEvidence<T>> {
    let p = u.len();
    let deltas: Vec<usize> = match &options.extensions {
        Some(d) => d.clone(),
        None => (0..bundle.n_labels()).collect(),
    };
    let mut out = Vec::new();
    for side in [Side::Right, Side::Left] {
        let continuation = match side {
            Side::Right => u[0],
            Side::Left => u[p - 1],
        };
        for &delta in deltas.iter().filter(|&&d| d != continuation) {
            let series: Vec<T> = (1..=n_max)
                .map(|n| {
                    let mut w = periodic_prefix(u, p * n);
                    match side {
                        Side::Right => w.push(delta),
                        Side::Left => w.insert(0, delta),
                    }
                    let full = periodic_prefix(u, p * (n + 1));
                    (log_cylinder(bundle, mu, &w) - log_cylinder(bundle, mu, &full)).exp()
                })
                .collect();
            if series.iter().any(|&s| s <= T::zero() || !s.is_finite()) {
                continue;
            }
            let quotients: Vec<T> = series.windows(2).map(|w| w[1] / w[0]).collect();
            let tail = quotients[quotients.len() - (quotients.len() / 4).max(1)..].to_vec();
            let fired = tail.iter().all(|&x| x < T::one() - T::of(options.decay_margin));
            out.push(VanishingEvidence {
                side,
                delta,
                series,
                tail_quotients: tail,
                fired,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::markov::{validate_markov, RawMeasure};

    fn run(b: &SystemBundle, json: &str, u: &str) -> ObstructionReport<f64> {
        let mu = validate_markov(b, &RawMeasure::from_json(json).unwrap()).unwrap();
        obstruction_diagnose(b, &mu, &b.parse_label_word(u).unwrap(), &DiagnoseOptions::default()).unwrap()
    }

    #[test]
    fn fig2_period_reduction() {
        let b = fixtures::fig2();
        let r = run(&b, fixtures::FIG2_P03_JSON, "0");
        assert_eq!(r.verdict, Verdict::PeriodReduction);
        let mut lim = r.period_reduction.limits.clone();
        lim.sort_by(f64::total_cmp);
        assert!((lim[0] - 0.6 / 1.3).abs() < 1e-10);
        assert!((lim[1] - 0.65).abs() < 1e-10);
    }

    #[test]
    fn fig1_polynomial() {
        let b = fixtures::fig1();
        let r = run(&b, fixtures::FIG1_MEASURE_JSON, "a");
        assert_eq!(r.verdict, Verdict::TransitionalPolynomial);
        let e = r.polynomial.unwrap();
        assert!((e.lambda - 0.5).abs() < 1e-6);
        assert!(e.alpha > 0.8 && e.alpha < 1.2, "alpha = {}", e.alpha);
    }

    #[test]
    fn fig3_vanishing() {
        let b = fixtures::fig3();
        let r = run(&b, fixtures::FIG3_MEASURE_JSON, "3");
        assert_eq!(r.verdict, Verdict::ContinuingVanishing);
        let two = b.labels().index_of("2").unwrap();
        let e = r
            .vanishing
            .iter()
            .find(|e| e.side == Side::Right && e.delta == two)
            .unwrap();
        assert!(e.fired);
        assert!((e.tail_quotients.last().unwrap() - 1.0 / 3.0).abs() < 0.05);
    }

    #[test]
    fn fig4_none_found() {
        let b = fixtures::fig4();
        let r = run(&b, fixtures::FIG4_UNIFORM_JSON, "a");
        assert_eq!(r.verdict, Verdict::NoneFoundAtHorizon);
        assert!(r.note.contains("not a Gibbs certificate"));
    }

    #[test]
    fn identity_map_is_clean() {
        let b = SystemBundle::identity(fixtures::fig2().sft().clone());
        let mu = MarkovMeasure::<f64>::uniform(&b).unwrap();
        for u in ["e", "fg", "efg"] {
            let w = b.parse_label_word(u).unwrap();
            let r = obstruction_diagnose(&b, &mu, &w, &DiagnoseOptions::default()).unwrap();
            assert_eq!(r.verdict, Verdict::NoneFoundAtHorizon, "u = {u}");
        }
    }
}
