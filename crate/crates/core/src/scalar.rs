use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Floating point scalar used by the measure engine: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Serialize + Send + Sync + 'static
{
    /// Default comparison tolerance for stochasticity and residual checks.
    fn tolerance() -> Self;

    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

/// `log(sum(exp(xs)))`, ignoring `-inf` terms.
pub fn log_sum_exp<T: Scalar>(xs: impl IntoIterator<Item = T>) -> T {
    let xs: Vec<T> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() {
        return max;
    }
    let sum = xs.iter().fold(T::zero(), |acc, &x| acc + (x - max).exp());
    max + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_direct() {
        let xs = [0.1f64.ln(), 0.2f64.ln(), f64::NEG_INFINITY];
        assert!((log_sum_exp(xs).exp() - 0.3).abs() < 1e-15);
        assert_eq!(log_sum_exp::<f64>([]), f64::NEG_INFINITY);
    }

    #[test]
    fn tolerances() {
        assert_eq!(<f64 as Scalar>::tolerance(), 1e-12);
        assert!(<f32 as Scalar>::tolerance() > f32::EPSILON);
    }
}
