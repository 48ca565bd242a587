//! One-step Markov measures on the domain shift.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph;
use crate::measure::linalg;
use crate::scalar::Scalar;
use crate::shift::SystemBundle;

/// Measure file contents. Rows and entries are keyed by symbol name;
/// missing entries are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawMeasure {
    pub matrix: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fully_supported: Option<bool>,
}

impl RawMeasure {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Row-stochastic transition matrix with a stationary initial vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure<T> {
    pub transition: Vec<Vec<T>>,
    pub initial: Vec<T>,
    /// Positive exactly on the allowed 2-blocks.
    pub fully_supported: bool,
}

/// Validates a measure file against a system. Without an initial vector the
/// stationary vector is computed.
pub fn validate_markov<T: Scalar>(bundle: &SystemBundle, raw: &RawMeasure) -> Result<MarkovMeasure<T>> {
    let n = bundle.n_symbols();
    let index = |s: &str| {
        bundle
            .symbols()
            .index_of(s)
            .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
    };
    let mut matrix = vec![vec![T::zero(); n]; n];
    for (from, row) in &raw.matrix {
        let a = index(from)?;
        for (to, &x) in row {
            let b = index(to)?;
            matrix[a][b] = T::of(x);
        }
    }
    let initial = match &raw.initial {
        Some(init) => {
            let mut v = vec![T::zero(); n];
            for (s, &x) in init {
                v[index(s)?] = T::of(x);
            }
            Some(v)
        }
        None => None,
    };
    let m = MarkovMeasure::new(bundle, matrix, initial)?;
    if raw.fully_supported == Some(true) && !m.fully_supported {
        return Err(Error::SupportViolation(
            "declared fully supported, but some allowed 2-block has probability 0".into(),
        ));
    }
    Ok(m)
}

impl<T: Scalar> MarkovMeasure<T> {
    /// Checks stochasticity and support; computes the stationary vector
    /// when `initial` is `None`.
    pub fn new(bundle: &SystemBundle, transition: Vec<Vec<T>>, initial: Option<Vec<T>>) -> Result<Self> {
        let n = bundle.n_symbols();
        let tol = T::tolerance() * T::of(n.max(1) as f64);
        let name = |a: usize| bundle.symbols().name(a).to_string();
        let mut full = true;
        for a in 0..n {
            let mut sum = T::zero();
            for b in 0..n {
                let x = transition[a][b];
                if x < T::zero() || !x.is_finite() {
                    return Err(Error::SupportViolation(format!(
                        "entry ({}, {}) is {x}",
                        name(a),
                        name(b)
                    )));
                }
                if x > T::zero() && !bundle.allowed(a, b) {
                    return Err(Error::SupportViolation(format!(
                        "positive probability on forbidden 2-block ({}, {})",
                        name(a),
                        name(b)
                    )));
                }
                if bundle.allowed(a, b) && x == T::zero() {
                    full = false;
                }
                sum = sum + x;
            }
            if (sum - T::one()).abs() > tol {
                return Err(Error::NotStochastic {
                    row: name(a),
                    sum: sum.to_f64_lossy(),
                });
            }
        }
        let initial = match initial {
            Some(p) => {
                let sum = p.iter().fold(T::zero(), |s, &x| s + x);
                if p.iter().any(|&x| x < T::zero()) || (sum - T::one()).abs() > tol {
                    return Err(Error::NotStochastic {
                        row: "initial".into(),
                        sum: sum.to_f64_lossy(),
                    });
                }
                let moved = linalg::vec_mat(&p, &transition);
                if moved.iter().zip(&p).any(|(&x, &y)| (x - y).abs() > tol) {
                    return Err(Error::NoStationary);
                }
                p
            }
            None => stationary(&transition)?,
        };
        Ok(MarkovMeasure {
            transition,
            initial,
            fully_supported: full,
        })
    }

    /// Each row uniform over the allowed successors.
    pub fn uniform(bundle: &SystemBundle) -> Result<Self> {
        let n = bundle.n_symbols();
        let matrix = (0..n)
            .map(|a| {
                let out = bundle.sft().successors(a);
                let w = T::one() / T::of(out.len() as f64);
                (0..n).map(|b| if out.contains(&b) { w } else { T::zero() }).collect()
            })
            .collect();
        Self::new(bundle, matrix, None)
    }

    pub fn len(&self) -> usize {
        self.initial.len()
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_empty()
    }

    pub fn to_raw(&self, bundle: &SystemBundle) -> RawMeasure {
        let name = |a: usize| bundle.symbols().name(a).to_string();
        let n = self.len();
        RawMeasure {
            matrix: (0..n)
                .map(|a| {
                    let row = (0..n)
                        .filter(|&b| self.transition[a][b] > T::zero())
                        .map(|b| (name(b), self.transition[a][b].to_f64_lossy()))
                        .collect();
                    (name(a), row)
                })
                .collect(),
            initial: Some(
                (0..n)
                    .map(|a| (name(a), self.initial[a].to_f64_lossy()))
                    .collect(),
            ),
            fully_supported: Some(self.fully_supported),
        }
    }
}

/// Unique stationary vector of a stochastic matrix whose support graph is
/// strongly connected.
pub fn stationary<T: Scalar>(p: &[Vec<T>]) -> Result<Vec<T>> {
    let n = p.len();
    let adj: Vec<Vec<usize>> = p
        .iter()
        .map(|row| (0..n).filter(|&j| row[j] > T::zero()).collect())
        .collect();
    if graph::scc(&adj).len() != 1 {
        return Err(Error::NoStationary);
    }
    // (P^T - I) x = 0 with the last equation replaced by sum(x) = 1
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| p[j][i] - if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    a[n - 1] = vec![T::one(); n];
    let mut b = vec![T::zero(); n];
    b[n - 1] = T::one();
    let x = linalg::solve(a, b, T::epsilon()).ok_or(Error::NoStationary)?;
    Ok(x.into_iter().map(|v| v.max(T::zero())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::shift::{Alphabet, Sft};

    #[test]
    fn fig2_stationary() {
        let b = fixtures::fig2();
        let m: MarkovMeasure<f64> =
            validate_markov(&b, &RawMeasure::from_json(fixtures::FIG2_P05_JSON).unwrap()).unwrap();
        for x in &m.initial {
            assert!((x - 1.0 / 3.0).abs() < 1e-14);
        }
        let m: MarkovMeasure<f64> =
            validate_markov(&b, &RawMeasure::from_json(fixtures::FIG2_P03_JSON).unwrap()).unwrap();
        let p = 0.3;
        let want = [(1.0 - p) / (1.0 + p), p / (1.0 + p), p / (1.0 + p)];
        for (x, y) in m.initial.iter().zip(want) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn fig1_valid_and_fully_supported() {
        let b = fixtures::fig1();
        let m: MarkovMeasure<f64> =
            validate_markov(&b, &RawMeasure::from_json(fixtures::FIG1_MEASURE_JSON).unwrap()).unwrap();
        assert!(m.fully_supported);
    }

    #[test]
    fn trivial_measure() {
        let b = SystemBundle::identity(Sft::new(Alphabet::new(["a"]).unwrap(), vec![vec![true]]));
        let m = MarkovMeasure::<f64>::uniform(&b).unwrap();
        assert_eq!(m.initial, vec![1.0]);
    }

    #[test]
    fn rejections() {
        let b = fixtures::fig2();
        let mut raw = RawMeasure::from_json(fixtures::FIG2_P05_JSON).unwrap();
        raw.matrix.get_mut("f").unwrap().insert("g".into(), 0.9);
        assert!(matches!(validate_markov::<f64>(&b, &raw), Err(Error::NotStochastic { .. })));
        let mut raw = RawMeasure::from_json(fixtures::FIG2_P05_JSON).unwrap();
        raw.matrix.get_mut("f").unwrap().insert("e".into(), 0.0001);
        assert!(matches!(validate_markov::<f64>(&b, &raw), Err(Error::SupportViolation(_))));
        let mut raw = RawMeasure::from_json(fixtures::FIG2_P05_JSON).unwrap();
        raw.matrix.insert("e".into(), [("e".to_string(), 1.0)].into());
        // e absorbs: the support is no longer strongly connected
        assert_eq!(validate_markov::<f64>(&b, &raw), Err(Error::NoStationary));
    }

    #[test]
    fn generic_over_f32() {
        let b = fixtures::fig2();
        let m: MarkovMeasure<f32> =
            validate_markov(&b, &RawMeasure::from_json(fixtures::FIG2_P05_JSON).unwrap()).unwrap();
        assert!((m.initial[0] - 1.0 / 3.0).abs() < 1e-5);
    }
}
