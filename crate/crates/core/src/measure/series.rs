//! Ratio series of cylinder measures along a periodic point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::markov::MarkovMeasure;
use crate::measure::pushforward::prefix_log_cylinders;
use crate::scalar::Scalar;
use crate::shift::SystemBundle;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow<T> {
    /// Prefix length `m`.
    pub m: usize,
    pub log_measure: T,
    /// `nu[prefix(m + 1)] / nu[prefix(m)]`.
    pub ratio: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSeries<T> {
    pub period: usize,
    /// Rows for `m = 1..=p (n_max + 1)`.
    pub single_step: Vec<RatioRow<T>>,
    /// `by_residue[k][n] = nu[prefix(p n + k + p)] / nu[prefix(p n + k)]`,
    /// for `n = 1..=n_max`.
    pub by_residue: Vec<Vec<T>>,
}

impl<T: Scalar> RatioSeries<T> {
    /// Single-step ratio at prefix length `m`.
    pub fn ratio_at(&self, m: usize) -> Option<T> {
        self.single_step.get(m.checked_sub(1)?).map(|r| r.ratio)
    }
}

/// Repeats the cycle `u` to length `len`.
pub fn periodic_prefix(u: &[usize], len: usize) -> Vec<usize> {
    u.iter().copied().cycle().take(len).collect()
}

pub fn gibbs_ratio_series<T: Scalar>(
    bundle: &SystemBundle,
    mu: &MarkovMeasure<T>,
    u: &[usize],
    n_max: usize,
) -> Result<RatioSeries<T>> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    if n_max < 10 {
        return Err(Error::InvalidArgument("n_max must be at least 10".into()));
    }
    let p = u.len();
    let len = p * (n_max + 2) + 1;
    let logs = prefix_log_cylinders(bundle, mu, &periodic_prefix(u, len));
    if logs.last().is_none_or(|&x| x == T::neg_infinity()) {
        return Err(Error::EmptyGraph);
    }
    // logs[m - 1] = log nu[prefix(m)]
    let single_step = (1..=p * (n_max + 1))
        .map(|m| RatioRow {
            m,
            log_measure: logs[m - 1],
            ratio: (logs[m] - logs[m - 1]).exp(),
        })
        .collect();
    let by_residue = (0..p)
        .map(|k| {
            (1..=n_max)
                .map(|n| (logs[p * n + k + p - 1] - logs[p * n + k - 1]).exp())
                .collect()
        })
        .collect();
    Ok(RatioSeries {
        period: p,
        single_step,
        by_residue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::markov::{validate_markov, RawMeasure};
    use crate::shift::{Alphabet, Sft};

    #[test]
    fn fig2_alternates() {
        let b = fixtures::fig2();
        let mu: MarkovMeasure<f64> =
            validate_markov(&b, &RawMeasure::from_json(fixtures::FIG2_P03_JSON).unwrap()).unwrap();
        let s = gibbs_ratio_series(&b, &mu, &[0], 60).unwrap();
        let p = 0.3;
        for m in 1..=50 {
            let want = if m % 2 == 1 { (1.0 + p) / 2.0 } else { 2.0 * p / (1.0 + p) };
            assert!((s.ratio_at(m).unwrap() - want).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn trivial_system_has_unit_ratios() {
        let b = SystemBundle::identity(Sft::new(Alphabet::new(["0"]).unwrap(), vec![vec![true]]));
        let mu = MarkovMeasure::<f64>::uniform(&b).unwrap();
        let s = gibbs_ratio_series(&b, &mu, &[0], 10).unwrap();
        assert!(s.single_step.iter().all(|r| r.ratio == 1.0));
        assert!(s.by_residue[0].iter().all(|&r| r == 1.0));
    }

    #[test]
    fn rejects_points_off_the_image() {
        let b = fixtures::fig2();
        let mu = MarkovMeasure::<f64>::uniform(&b).unwrap();
        let u = b.parse_label_word("10").unwrap();
        assert_eq!(gibbs_ratio_series(&b, &mu, &u, 10), Err(Error::EmptyGraph));
    }
}
