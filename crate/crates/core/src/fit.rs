//! Least-squares line fits used for exponents and scaling laws.

use crate::error::{Error, Result};
use crate::summation::compensated_sum;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
}

pub fn linear_fit<T: Scalar>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::domain("linear_fit", format!("{} x values, {} y values", xs.len(), ys.len())));
    }
    let n = T::from_index(xs.len());
    let mx = compensated_sum(xs.iter().copied()) / n;
    let my = compensated_sum(ys.iter().copied()) / n;
    let sxx = compensated_sum(xs.iter().map(|&x| (x - mx) * (x - mx)));
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)));
    if sxx == T::zero() {
        return Err(Error::domain("linear_fit", "all x values coincide"));
    }
    let slope = sxy / sxx;
    Ok(LinearFit { slope, intercept: my - slope * mx })
}

/// Fit of `ln y = slope·ln x + intercept`; needs positive data.
pub fn log_log_fit<T: Scalar>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    if xs.iter().chain(ys).any(|v| !(*v > T::zero())) {
        return Err(Error::domain("log_log_fit", "non-positive value"));
    }
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly)
}

/// `n` points spread geometrically over `[lo, hi]`, endpoints included.
pub fn geometric_grid<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let steps = T::from_index(n - 1);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * T::from_index(i) / steps).exp()
            }
        })
        .collect()
}

/// Richardson extrapolation to `K → ∞` for values with an expansion in
/// powers of `K^{-1/2}`: the interpolating polynomial in `K^{-1/2}` through
/// all points, evaluated at zero.
pub fn extrapolate_inverse_sqrt<T: Scalar>(truncations: &[T], values: &[T]) -> Result<T> {
    if truncations.len() != values.len() || truncations.is_empty() {
        return Err(Error::domain("extrapolate", "need matching, non-empty truncation and value lists"));
    }
    let xs: Vec<T> = truncations.iter().map(|k| k.sqrt().recip()).collect();
    // Neville's scheme at x = 0
    let mut p = values.to_vec();
    for level in 1..xs.len() {
        for i in 0..xs.len() - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            if xi == xj {
                return Err(Error::domain("extrapolate", "repeated truncation"));
            }
            p[i] = (xi * p[i + 1] - xj * p[i]) / (xi - xj);
        }
    }
    Ok(p[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrapolation_removes_half_powers() {
        let ks = [100.0f64, 400.0, 1600.0];
        let vals: Vec<f64> = ks.iter().map(|k| 1.25 + 3.0 / k.sqrt() - 7.0 / k).collect();
        assert!((extrapolate_inverse_sqrt(&ks, &vals).unwrap() - 1.25).abs() < 1e-13);
    }


    #[test]
    fn recovers_power_law() {
        let xs = geometric_grid(1.0f64, 1000.0, 7);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.75)).collect();
        let fit = log_log_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 0.75).abs() < 1e-13);
        assert!((fit.intercept.exp() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(linear_fit(&[1.0f64], &[2.0]).is_err());
        assert!(linear_fit(&[1.0f64, 1.0], &[2.0, 3.0]).is_err());
        assert!(log_log_fit(&[1.0f64, 2.0], &[0.0, 3.0]).is_err());
    }
}
