//! Dense helpers: Gaussian elimination and matrix-vector products.

use crate::scalar::Scalar;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls below `eps`.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>, eps: T) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() <= eps {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            let v = b[col];
            b[row] = b[row] - f * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// `m v`
pub fn mat_vec<T: Scalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(T::zero(), |s, (&a, &b)| s + a * b))
        .collect()
}

/// `v m`
pub fn vec_mat<T: Scalar>(v: &[T], m: &[Vec<T>]) -> Vec<T> {
    let n = m.first().map_or(0, Vec::len);
    let mut out = vec![T::zero(); n];
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            out[j] = out[j] + v[i] * x;
        }
    }
    out
}

pub fn max_abs<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = vec![vec![2.0f64, 1.0], vec![1.0, 3.0]];
        let x = solve(a, vec![3.0, 5.0], 1e-14).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        assert!(solve(vec![vec![1.0, 1.0], vec![1.0, 1.0]], vec![1.0, 1.0], 1e-14).is_none());
    }

    #[test]
    fn products() {
        let m = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert_eq!(mat_vec(&m, &[1.0, 1.0]), vec![3.0, 7.0]);
        assert_eq!(vec_mat(&[1.0, 1.0], &m), vec![4.0, 6.0]);
        assert_eq!(max_abs(&[-3.0, 2.0]), 3.0);
    }
}
