//! Class-restricted transfer matrices, their Perron rates and rate tuning.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::markov::MarkovMeasure;
use crate::measure::perron::{perron, Perron};
use crate::scalar::Scalar;
use crate::shift::SystemBundle;
use crate::transition::classes::{periodic_classes, ClassReport};
use crate::transition::Side;

/// The matrix `A*` of a class: rows and columns are the class's core
/// symbols at residue 0; entry `(a, b)` sums transition weights over core
/// paths of length `q` from `(0, a)` to `(0, b)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMatrix<T> {
    pub class: usize,
    pub states: Vec<usize>,
    pub matrix: Vec<Vec<T>>,
}

pub fn class_matrix<T: Scalar>(
    bundle: &SystemBundle,
    mu: &MarkovMeasure<T>,
    report: &ClassReport,
    class: usize,
) -> Result<ClassMatrix<T>> {
    if class >= report.classes.len() {
        return Err(Error::NoSuchClass(class));
    }
    let q = report.analysis_period;
    let core = &report.core[class];
    if let Some(residue) = (0..q).find(|&i| core[i].is_empty()) {
        return Err(Error::EmptyMarkedAlphabet { class, residue });
    }
    let n = bundle.n_symbols();
    let states = core[0].to_vec();
    let matrix = states
        .iter()
        .map(|&a| {
            let mut v = vec![T::zero(); n];
            v[a] = T::one();
            for step in 1..=q {
                let allowed = &core[step % q];
                let mut next = vec![T::zero(); n];
                for c in 0..n {
                    if v[c] == T::zero() {
                        continue;
                    }
                    for &d in bundle.sft().successors(c) {
                        if allowed.contains(d) {
                            next[d] = next[d] + v[c] * mu.transition[c][d];
                        }
                    }
                }
                v = next;
            }
            states.iter().map(|&b| v[b]).collect()
        })
        .collect();
    Ok(ClassMatrix { class, states, matrix })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassGrowth<T> {
    pub class: usize,
    pub period: usize,
    pub matrix: ClassMatrix<T>,
    /// Perron rate per `q` steps.
    pub lambda: T,
    pub residual: T,
    /// `mu[core cylinder on [0, q n]] / lambda^n` at `n = n_max`.
    pub k_estimate: T,
    /// Relative spread of that ratio over the last quarter of the run.
    pub k_spread: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthProfile<T> {
    pub word: Vec<usize>,
    pub analysis_period: usize,
    pub classes: Vec<ClassGrowth<T>>,
    /// Classes mapped to each other by the shift share their rate.
    pub orbit_consistent: bool,
}

pub fn growth_profile<T: Scalar>(
    bundle: &SystemBundle,
    mu: &MarkovMeasure<T>,
    u: &[usize],
    n_max: usize,
    phase_cap: usize,
) -> Result<GrowthProfile<T>> {
    let report = periodic_classes(bundle, u, Side::Right, phase_cap)?;
    growth_from_report(bundle, mu, &report, n_max)
}

pub fn growth_from_report<T: Scalar>(
    bundle: &SystemBundle,
    mu: &MarkovMeasure<T>,
    report: &ClassReport,
    n_max: usize,
) -> Result<GrowthProfile<T>> {
    let mut classes = Vec::new();
    for c in 0..report.classes.len() {
        let matrix = class_matrix(bundle, mu, report, c)?;
        let Perron { lambda, residual, .. } = perron(&matrix.matrix)?;
        let (k_estimate, k_spread) = k_constant(mu, &matrix, lambda, n_max.max(4));
        classes.push(ClassGrowth {
            class: c,
            period: report.classes[c].period,
            matrix,
            lambda,
            residual,
            k_estimate,
            k_spread,
        });
    }
    let orbit_consistent = shift_pairs(report)
        .iter()
        .all(|&(a, b)| (classes[a].lambda - classes[b].lambda).abs() <= T::of(1e-9));
    Ok(GrowthProfile {
        word: report.word.clone(),
        analysis_period: report.analysis_period,
        classes,
        orbit_consistent,
    })
}

/// Pairs of classes exchanged by the shift by `|u|`.
fn shift_pairs(report: &ClassReport) -> Vec<(usize, usize)> {
    let q = report.analysis_period;
    let p = report.word.len();
    let mut out = Vec::new();
    for (i, c) in report.classes.iter().enumerate() {
        let (r, a) = c.vertices[0];
        if let Some(j) = report.class_of_vertex((r + p) % q, a) {
            out.push((i, j));
        }
    }
    out
}

fn k_constant<T: Scalar>(mu: &MarkovMeasure<T>, cm: &ClassMatrix<T>, lambda: T, n_max: usize) -> (T, T) {
    let mut w: Vec<T> = cm.states.iter().map(|&a| mu.initial[a]).collect();
    let mut tail = Vec::new();
    for n in 1..=n_max {
        let mut next = vec![T::zero(); w.len()];
        for (i, row) in cm.matrix.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                next[j] = next[j] + w[i] * x / lambda;
            }
        }
        w = next;
        if n > n_max - n_max / 4 {
            tail.push(w.iter().fold(T::zero(), |s, &x| s + x));
        }
    }
    let k = *tail.last().expect("nonempty tail");
    let lo = tail.iter().copied().fold(T::infinity(), T::min);
    let hi = tail.iter().copied().fold(T::neg_infinity(), T::max);
    (k, (hi - lo) / k.abs())
}

/// One-parameter family: entry `(row, entry)` set to `t`, the rest of the
/// row rescaled to sum to `1 - t`, stationary vector recomputed.
pub fn row_family<T: Scalar>(
    bundle: &SystemBundle,
    base: &MarkovMeasure<T>,
    row: usize,
    entry: usize,
    t: T,
) -> Result<MarkovMeasure<T>> {
    if !bundle.allowed(row, entry) {
        return Err(Error::InvalidArgument("tuned entry must be an allowed 2-block".into()));
    }
    let mut m = base.transition.clone();
    let rest = T::one() - m[row][entry];
    for b in 0..m.len() {
        if b == entry {
            m[row][b] = t;
        } else if rest > T::zero() {
            m[row][b] = m[row][b] / rest * (T::one() - t);
        }
    }
    MarkovMeasure::new(bundle, m, None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tuned<T> {
    pub t: T,
    pub lambda: T,
    pub iterations: usize,
    #[serde(skip)]
    pub measure: MarkovMeasure<T>,
}

pub const TUNE_TOLERANCE: f64 = 1e-10;

/// Bisection on `t` in `[t_lo, t_hi]` until the class rate is within
/// `1e-10` of `target`.
pub fn tune_class_rate<T: Scalar>(
    bundle: &SystemBundle,
    family: impl Fn(T) -> Result<MarkovMeasure<T>>,
    report: &ClassReport,
    class: usize,
    target: T,
    t_lo: T,
    t_hi: T,
) -> Result<Tuned<T>> {
    let rate = |t: T| -> Result<(T, MarkovMeasure<T>)> {
        let mu = family(t)?;
        let cm = class_matrix(bundle, &mu, report, class)?;
        Ok((perron(&cm.matrix)?.lambda, mu))
    };
    let (l_lo, m_lo) = rate(t_lo)?;
    let (l_hi, m_hi) = rate(t_hi)?;
    let (lo, hi) = if l_lo <= l_hi { (l_lo, l_hi) } else { (l_hi, l_lo) };
    if target < lo || target > hi {
        return Err(Error::TargetOutOfRange {
            target: target.to_f64_lossy(),
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        });
    }
    let tol = T::of(TUNE_TOLERANCE);
    if (l_lo - target).abs() <= tol {
        return Ok(Tuned { t: t_lo, lambda: l_lo, iterations: 0, measure: m_lo });
    }
    if (l_hi - target).abs() <= tol {
        return Ok(Tuned { t: t_hi, lambda: l_hi, iterations: 0, measure: m_hi });
    }
    let increasing = l_lo < l_hi;
    let (mut a, mut b) = (t_lo, t_hi);
    for it in 1..=200 {
        let mid = (a + b) / T::of(2.0);
        let (l, mu) = rate(mid)?;
        if (l - target).abs() <= tol {
            return Ok(Tuned { t: mid, lambda: l, iterations: it, measure: mu });
        }
        if (l < target) == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::NoConvergence {
        residual: f64::NAN,
        iterations: 200,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::markov::{validate_markov, RawMeasure};
    use crate::transition::classes::DEFAULT_PHASE_CAP;

    fn measure(b: &SystemBundle, json: &str) -> MarkovMeasure<f64> {
        validate_markov(b, &RawMeasure::from_json(json).unwrap()).unwrap()
    }

    #[test]
    fn fig1_class_matrices() {
        let b = fixtures::fig1();
        let mu = measure(&b, fixtures::FIG1_MEASURE_JSON);
        let r = periodic_classes(&b, &[0], Side::Right, DEFAULT_PHASE_CAP).unwrap();
        let gh = class_matrix(&b, &mu, &r, 1).unwrap();
        assert_eq!(gh.matrix, vec![vec![0.25, 0.25], vec![0.25, 0.25]]);
        let e = class_matrix(&b, &mu, &r, 0).unwrap();
        assert_eq!(e.matrix, vec![vec![0.5]]);
        let g = growth_profile(&b, &mu, &[0], 60, DEFAULT_PHASE_CAP).unwrap();
        for c in &g.classes {
            assert!((c.lambda - 0.5).abs() < 1e-12);
            assert!(c.residual <= 1e-12);
            assert!(c.k_spread < 1e-6);
        }
        assert!(matches!(class_matrix(&b, &mu, &r, 5), Err(Error::NoSuchClass(5))));
    }

    #[test]
    fn fig2_period_two() {
        let b = fixtures::fig2();
        let mu = measure(&b, fixtures::FIG2_P05_JSON);
        let g = growth_profile(&b, &mu, &b.parse_label_word("0").unwrap(), 60, DEFAULT_PHASE_CAP).unwrap();
        assert_eq!(g.analysis_period, 2);
        assert_eq!(g.classes.len(), 2);
        for c in &g.classes {
            assert_eq!(c.matrix.matrix, vec![vec![0.5]]);
        }
        assert!(g.orbit_consistent);
    }

    #[test]
    fn fig4_one_by_one() {
        let b = fixtures::fig4();
        let mu = measure(&b, fixtures::FIG4_UNIFORM_JSON);
        let g = growth_profile(&b, &mu, &b.parse_label_word("a").unwrap(), 60, DEFAULT_PHASE_CAP).unwrap();
        assert_eq!(g.classes.len(), 2);
        for c in &g.classes {
            assert!((c.lambda - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tuning() {
        let b = fixtures::fig1();
        let base = measure(&b, fixtures::FIG1_MEASURE_JSON);
        let r = periodic_classes(&b, &[0], Side::Right, DEFAULT_PHASE_CAP).unwrap();
        let fam = |t: f64| row_family(&b, &base, 0, 0, t);
        for target in [0.5, 0.25] {
            let tuned = tune_class_rate(&b, fam, &r, 0, target, 1e-6, 1.0 - 1e-6).unwrap();
            assert!((tuned.t - target).abs() <= 1e-10);
            assert!((tuned.measure.transition[0][0] - target).abs() <= 1e-10);
        }
        assert!(matches!(
            tune_class_rate(&b, fam, &r, 0, 1.0, 1e-6, 1.0 - 1e-6),
            Err(Error::TargetOutOfRange { .. })
        ));
    }
}
