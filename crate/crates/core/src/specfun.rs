//! Gamma-function helpers and the s-wave oscillator basis in `D` dimensions.
//!
//! The zero-order problem is `(-½Δ + ½r²) ψ = E ψ`. Its s-wave eigenfunctions
//! are
//!
//! ```text
//! ψ_k(r) = N_k · L_k^{(α)}(r²) · exp(-r²/2),   α = D/2 - 1,   E_k = 2k + D/2
//! ```
//!
//! with `L_k^{(α)}` the generalized Laguerre polynomials.
//!
//! ## Normalization
//!
//! The D-dimensional radial measure is `S_{D-1} r^{D-1} dr` with
//! `S_{D-1} = 2 π^{D/2} / Γ(D/2)`. Substituting `x = r²` and using
//! `∫₀^∞ [L_k^{(α)}(x)]² x^α e^{-x} dx = Γ(k+α+1)/k!` gives
//!
//! ```text
//! N_k² = 2 Γ(k+1) / (S_{D-1} Γ(k + D/2)).
//! ```
//!
//! Since `L_k^{(α)}(0) = Γ(k+α+1) / (Γ(α+1) k!)`, the squared value at the
//! origin is
//!
//! ```text
//! ψ_k(0)² = N_k² L_k^{(α)}(0)² = Γ(k + D/2) / (π^{D/2} Γ(D/2) Γ(k+1)),
//! ```
//!
//! which is exactly the weight appearing in the secular sum. This is the only
//! normalization consistent with that sum, so it is the one used throughout.
//!
//! ## Normalized recurrence
//!
//! Evaluating `N_k` and `L_k` separately overflows for large `k`. Instead the
//! normalized functions obey
//!
//! ```text
//! ψ_{k+1} = [(2k+α+1-x) a_k ψ_k - (k+α) a_k a_{k-1} ψ_{k-1}] / (k+1),
//! a_k = N_{k+1}/N_k = sqrt((k+1)/(k+α+1)),
//! ```
//!
//! started from `ψ_0 = π^{-D/4} e^{-x/2}`, `ψ_{-1} = 0`.

use crate::error::{Error, Result};
use crate::Scalar;

/// Spatial dimension `D ≥ 1`. Non-integer values are allowed wherever only
/// closed forms are involved.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dimension<T>(T);

impl<T: Scalar> Dimension<T> {
    pub fn new(d: T) -> Result<Self> {
        if d.is_finite() && d >= T::one() {
            Ok(Self(d))
        } else {
            Err(Error::domain("dimension", format!("D = {d} (need D >= 1)")))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    #[inline]
    pub fn half(self) -> T {
        self.0 / T::lit(2.0)
    }

    /// Laguerre parameter `α = D/2 - 1`.
    #[inline]
    pub fn laguerre_alpha(self) -> T {
        self.half() - T::one()
    }

    /// Surface area `S_{D-1} = 2π^{D/2}/Γ(D/2)` of the unit sphere (2 for D = 1).
    pub fn sphere_area(self) -> T {
        T::lit(2.0) * T::PI().powf(self.half()) / gamma(self.half())
    }

    /// `E_k = 2k + D/2`.
    #[inline]
    pub fn unperturbed_energy(self, k: usize) -> T {
        T::lit(2.0) * T::from_index(k) + self.half()
    }

    /// `1/(π^{D/2} Γ(D/2))`, the prefactor turning gamma ratios into `ψ_k(0)²`.
    pub fn origin_prefactor(self) -> T {
        T::one() / (T::PI().powf(self.half()) * gamma(self.half()))
    }
}

impl<T: Scalar> TryFrom<f64> for Dimension<T> {
    type Error = Error;
    fn try_from(d: f64) -> Result<Self> {
        Dimension::new(T::lit(d))
    }
}

// Stirling-series coefficients B_{2j} / (2j (2j-1)), j = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural logarithm of `Γ(x)` for `x > 0`.
///
/// Arguments below 10 are shifted up with `Γ(x+1) = xΓ(x)` and the Stirling
/// series is summed there.
pub fn log_gamma<T: Scalar>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("x = {x} (need x > 0)")));
    }
    if x == T::one() || x == T::lit(2.0) {
        return Ok(T::zero());
    }
    let ten = T::lit(10.0);
    let mut y = x;
    let mut shift = T::one();
    while y < ten {
        shift = shift * y;
        y = y + T::one();
    }
    let inv = T::one() / y;
    let inv2 = inv * inv;
    let mut series = T::zero();
    for c in STIRLING.iter().rev() {
        series = series * inv2 + T::lit(*c);
    }
    series = series * inv;
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    Ok((y - T::lit(0.5)) * y.ln() - y + half_ln_2pi + series - shift.ln())
}

/// `Γ(x)` for `x > 0` small enough not to overflow; panics on `x <= 0`.
pub(crate) fn gamma<T: Scalar>(x: T) -> T {
    log_gamma(x).expect("gamma argument must be positive").exp()
}

/// Successive ratios `Γ(k + D/2)/Γ(k + 1)` for `k = 0, 1, 2, …`, produced by
/// the recurrence `r_{k+1} = r_k (k + D/2)/(k + 1)` from `r_0 = Γ(D/2)`.
#[derive(Debug, Clone)]
pub struct WeightRatios<T> {
    next: T,
    k: usize,
    half_d: T,
}

impl<T: Scalar> WeightRatios<T> {
    pub fn new(dim: Dimension<T>) -> Self {
        Self { next: gamma(dim.half()), k: 0, half_d: dim.half() }
    }
}

impl<T: Scalar> Iterator for WeightRatios<T> {
    type Item = T;

    #[inline]
    fn next(&mut self) -> Option<T> {
        let out = self.next;
        let kf = T::from_index(self.k);
        self.next = out * (kf + self.half_d) / (kf + T::one());
        self.k += 1;
        Some(out)
    }
}

/// `Γ(k + D/2)/Γ(k + 1)` by recurrence.
pub fn weight_ratio<T: Scalar>(k: usize, dim: Dimension<T>) -> T {
    WeightRatios::new(dim).nth(k).expect("the ratio sequence is infinite")
}

/// `|ψ_k(0)|²` for `k = 0..=max_k`.
pub fn origin_densities<T: Scalar>(max_k: usize, dim: Dimension<T>) -> Vec<T> {
    let pre = dim.origin_prefactor();
    WeightRatios::new(dim).take(max_k + 1).map(|r| r * pre).collect()
}

/// `|ψ_k(0)|² = Γ(k + D/2) / (π^{D/2} Γ(D/2) Γ(k+1))`.
pub fn psi0_sq<T: Scalar>(k: usize, dim: Dimension<T>) -> T {
    weight_ratio(k, dim) * dim.origin_prefactor()
}

/// Evaluates `ψ_0(r), …, ψ_{max_k}(r)` into `out` (cleared first).
///
/// Values underflow to zero for `r` beyond roughly 37 in `f64`.
pub fn radial_basis_into<T: Scalar>(dim: Dimension<T>, r: T, max_k: usize, out: &mut Vec<T>) {
    out.clear();
    out.reserve(max_k + 1);
    let alpha = dim.laguerre_alpha();
    let x = r * r;
    let two = T::lit(2.0);
    let mut prev = T::zero();
    let mut cur = T::PI().powf(-dim.half() / two) * (-x / two).exp();
    let mut a_prev = T::zero();
    out.push(cur);
    for k in 0..max_k {
        let kf = T::from_index(k);
        let a_k = ((kf + T::one()) / (kf + alpha + T::one())).sqrt();
        let next = ((two * kf + alpha + T::one() - x) * a_k * cur - (kf + alpha) * a_k * a_prev * prev)
            / (kf + T::one());
        prev = cur;
        cur = next;
        a_prev = a_k;
        out.push(cur);
    }
}

/// Normalized s-wave oscillator eigenfunction `ψ_k(r)` with `ψ_k(0) > 0`.
pub fn radial_eigenfunction<T: Scalar>(k: usize, dim: Dimension<T>, r: T) -> Result<T> {
    if !(r >= T::zero()) {
        return Err(Error::domain("radial_eigenfunction", format!("r = {r} (need r >= 0)")));
    }
    let mut vals = Vec::new();
    radial_basis_into(dim, r, k, &mut vals);
    Ok(vals[k])
}
