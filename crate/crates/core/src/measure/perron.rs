//! Perron eigenvalue and eigenvectors of a primitive nonnegative matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::measure::linalg::{mat_vec, max_abs, vec_mat};
use crate::scalar::Scalar;

pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perron<T> {
    pub lambda: T,
    /// Right eigenvector, max-norm 1.
    pub right: Vec<T>,
    /// Left eigenvector, max-norm 1.
    pub left: Vec<T>,
    /// `max(|M r - lambda r|, |l M - lambda l|)` in the max norm.
    pub residual: T,
    pub iterations: usize,
}

/// Power iteration from the all-ones vector.
pub fn perron<T: Scalar>(m: &[Vec<T>]) -> Result<Perron<T>> {
    let support: Vec<Vec<bool>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x > T::zero()).collect())
        .collect();
    if graph::primitive_exponent(&support).is_err() {
        return Err(Error::NotPrimitive);
    }
    let (lambda, right, r_res, r_it) = power(m, |v| mat_vec(m, v))?;
    let (_, left, l_res, l_it) = power(m, |v| vec_mat(v, m))?;
    Ok(Perron {
        lambda,
        right,
        left,
        residual: r_res.max(l_res),
        iterations: r_it.max(l_it),
    })
}

fn power<T: Scalar>(m: &[Vec<T>], apply: impl Fn(&[T]) -> Vec<T>) -> Result<(T, Vec<T>, T, usize)> {
    let n = m.len();
    let tol = T::tolerance();
    let mut v = vec![T::one(); n];
    let mut residual = T::infinity();
    for it in 1..=MAX_ITERATIONS {
        let w = apply(&v);
        let lambda = max_abs(&w);
        residual = w
            .iter()
            .zip(&v)
            .fold(T::zero(), |r, (&a, &b)| r.max((a - lambda * b).abs()));
        v = w.into_iter().map(|x| x / lambda).collect();
        if residual <= tol {
            return Ok((lambda, v, residual, it));
        }
    }
    Err(Error::NoConvergence {
        residual: residual.to_f64_lossy(),
        iterations: MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = perron(&[vec![0.25f64, 0.25], vec![0.25, 0.25]]).unwrap();
        assert!((p.lambda - 0.5).abs() < 1e-15);
        assert!(p.residual <= 1e-12);
        assert_eq!(perron(&[vec![0.7]]).unwrap().lambda, 0.7);
        assert_eq!(perron(&[vec![0.0, 1.0], vec![1.0, 0.0]]), Err(Error::NotPrimitive));
    }

    #[test]
    fn golden_mean() {
        let p = perron(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((p.lambda - phi).abs() < 1e-12);
        assert!((p.right[1] / p.right[0] - 1.0 / phi).abs() < 1e-12);
    }
}
