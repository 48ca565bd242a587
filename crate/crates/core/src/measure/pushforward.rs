//! Cylinder measures of the pushforward `nu = mu o pi^-1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::markov::MarkovMeasure;
use crate::scalar::{log_sum_exp, Scalar};
use crate::shift::{self, Limits, SystemBundle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Forward sum over fiber states.
    Transfer,
    /// Explicit sum over enumerated fiber words.
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pushforward<T> {
    pub value: T,
    pub log_value: T,
    /// The word has an empty fiber; the value is 0.
    pub empty_fiber: bool,
}

/// `log nu[w[..m]]` for every `m = 1..=|w|`, from one scaled forward pass.
pub fn prefix_log_cylinders<T: Scalar>(bundle: &SystemBundle, mu: &MarkovMeasure<T>, w: &[usize]) -> Vec<T> {
    let n = bundle.n_symbols();
    let mut out = Vec::with_capacity(w.len());
    if w.is_empty() {
        return out;
    }
    let mut v: Vec<T> = (0..n)
        .map(|a| if bundle.label(a) == w[0] { mu.initial[a] } else { T::zero() })
        .collect();
    let mut log_scale = T::zero();
    for (i, &l) in w.iter().enumerate() {
        if i > 0 {
            let mut next = vec![T::zero(); n];
            for a in 0..n {
                if v[a] == T::zero() {
                    continue;
                }
                for &b in bundle.sft().successors(a) {
                    if bundle.label(b) == l {
                        next[b] = next[b] + v[a] * mu.transition[a][b];
                    }
                }
            }
            v = next;
        }
        let s = v.iter().fold(T::zero(), |acc, &x| acc + x);
        if s == T::zero() {
            out.resize(w.len(), T::neg_infinity());
            return out;
        }
        log_scale = log_scale + s.ln();
        for x in &mut v {
            *x = *x / s;
        }
        out.push(log_scale);
    }
    out
}

/// `log nu[w]` (`-inf` off the image language).
pub fn log_cylinder<T: Scalar>(bundle: &SystemBundle, mu: &MarkovMeasure<T>, w: &[usize]) -> T {
    prefix_log_cylinders(bundle, mu, w)
        .last()
        .copied()
        .unwrap_or(T::zero())
}

pub fn pushforward<T: Scalar>(
    bundle: &SystemBundle,
    mu: &MarkovMeasure<T>,
    w: &[usize],
    mode: Mode,
    limits: &Limits,
) -> Result<Pushforward<T>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let log_value = match mode {
        Mode::Transfer => log_cylinder(bundle, mu, w),
        Mode::Brute => {
            let words = shift::fiber(bundle, w, limits)?;
            log_sum_exp(words.iter().map(|u| {
                u.windows(2)
                    .fold(mu.initial[u[0]].ln(), |s, p| s + mu.transition[p[0]][p[1]].ln())
            }))
        }
    };
    Ok(Pushforward {
        value: log_value.exp(),
        log_value,
        empty_fiber: log_value == T::neg_infinity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::markov::{validate_markov, RawMeasure};

    fn fig2(json: &str) -> (SystemBundle, MarkovMeasure<f64>) {
        let b = fixtures::fig2();
        let m = validate_markov(&b, &RawMeasure::from_json(json).unwrap()).unwrap();
        (b, m)
    }

    #[test]
    fn fig2_values() {
        let (b, m) = fig2(fixtures::FIG2_P05_JSON);
        let lim = Limits::default();
        let w = |s: &str| b.parse_label_word(s).unwrap();
        let v0 = pushforward(&b, &m, &w("0"), Mode::Transfer, &lim).unwrap().value;
        let v00 = pushforward(&b, &m, &w("00"), Mode::Transfer, &lim).unwrap().value;
        assert!((v0 - 2.0 / 3.0).abs() < 1e-14);
        assert!((v00 - 0.5).abs() < 1e-14);
        assert!((v00 / v0 - 0.75).abs() < 1e-14);
        let off = pushforward(&b, &m, &w("101"), Mode::Transfer, &lim).unwrap();
        assert!(off.empty_fiber && off.value == 0.0);
        let brute = pushforward(&b, &m, &w("101"), Mode::Brute, &lim).unwrap();
        assert!(brute.empty_fiber);
    }

    #[test]
    fn prefixes_match_single_calls() {
        let (b, m) = fig2(fixtures::FIG2_P03_JSON);
        let w = b.parse_label_word("0010010011").unwrap();
        let all = prefix_log_cylinders(&b, &m, &w);
        for k in 1..=w.len() {
            let brute = pushforward(&b, &m, &w[..k], Mode::Brute, &Limits::default()).unwrap();
            assert!((all[k - 1] - brute.log_value).abs() < 1e-12);
        }
    }

    #[test]
    fn fig1_closed_form() {
        let b = fixtures::fig1();
        let m: MarkovMeasure<f64> =
            validate_markov(&b, &RawMeasure::from_json(fixtures::FIG1_MEASURE_JSON).unwrap()).unwrap();
        let a = vec![0usize; 40];
        let logs = prefix_log_cylinders(&b, &m, &a);
        for n in 1..=40 {
            let want = (n as f64 + 2.0) * 0.5f64.powi(n as i32 + 1);
            assert!((logs[n - 1].exp() / want - 1.0).abs() < 1e-12, "n = {n}");
        }
    }
}
