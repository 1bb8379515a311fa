//! Compensated accumulation.
//!
//! Each addition goes through the branch-free two-sum error-free
//! transformation; the rounding errors are accumulated separately and folded
//! back in at the end (Kahan–Babuška / Neumaier style).

use crate::Scalar;

#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    err: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), err: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let s = self.sum + x;
        let bp = s - self.sum;
        let e = (self.sum - (s - bp)) + (x - bp);
        self.sum = s;
        self.err = self.err + e;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.err
    }
}

impl<T: Scalar> Extend<T> for CompensatedSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(iter: I) -> T {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}
