//! Bisection on open brackets.

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Bracketed<T> {
    pub root: T,
    pub iterations: usize,
}

/// Root of a strictly decreasing `f` on the open interval `(lo, hi)`, known
/// to be positive next to `lo` and negative next to `hi`.
///
/// Only midpoints are evaluated, so the ends may be poles. Stops when the
/// bracket is narrower than `rel_tol·|mid|` or cannot be split further.
pub(crate) fn bisect_decreasing<T, F>(mut f: F, mut lo: T, mut hi: T, rel_tol: T) -> Result<Bracketed<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    const MAX_ITER: usize = 4000;
    let two = T::lit(2.0);
    for iterations in 0..MAX_ITER {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi || hi - lo <= rel_tol * mid.abs() {
            return Ok(Bracketed { root: mid, iterations });
        }
        let v = f(mid)?;
        if v.is_nan() {
            return Err(Error::NoConvergence(format!("NaN while bisecting at {mid}")));
        }
        if v > T::zero() {
            lo = mid;
        } else if v < T::zero() {
            hi = mid;
        } else {
            return Ok(Bracketed { root: mid, iterations });
        }
    }
    Err(Error::NoConvergence(format!("bisection exhausted {MAX_ITER} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_root_next_to_a_pole() {
        // 1/x - 1e9 has its root at 1e-9, right next to the pole at 0
        let b = bisect_decreasing(|x: f64| Ok(1.0 / x - 1.0e9), 0.0, 2.0, 1e-12).unwrap();
        assert!((b.root - 1.0e-9).abs() < 1e-20);
    }

    #[test]
    fn tan_branch() {
        // -tan x - 1 falls from +∞ to -∞ on (π/2, 3π/2)
        let f = |x: f64| Ok(-x.tan() - 1.0);
        let b = bisect_decreasing(f, std::f64::consts::FRAC_PI_2, 1.5 * std::f64::consts::PI, 1e-14).unwrap();
        assert!((b.root - 0.75 * std::f64::consts::PI).abs() < 1e-12);
    }
}
