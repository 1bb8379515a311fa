//! Level shifts of the oscillator with a contact repulsion in a truncated
//! basis.
//!
//! Expanding in the `K + 1` lowest s-wave oscillator states, an energy
//! `E = D/2 + Δ` is an eigenvalue exactly when
//!
//! ```text
//! 1/g = Σ_{k=0}^{K} |ψ_k(0)|² / (Δ - 2k)
//! ```
//!
//! The right-hand side decreases strictly between consecutive poles, so each
//! level has exactly one root in `(2n, 2n+2)` for repulsion, which bisection
//! finds without ever touching the poles. The hard core (`g → ∞`) solves the
//! same equation with left-hand side zero.

use crate::error::{Error, Result};
use crate::fit::{geometric_grid, log_log_fit};
use crate::roots::bisect_decreasing;
use crate::specfun::{origin_densities, psi0_sq, Dimension, WeightRatios};
use crate::summation::CompensatedSum;
use crate::Scalar;

/// Strength of the contact term `g δ(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling<T> {
    Finite(T),
    /// The `g → ∞` limit.
    HardCore,
}

impl<T: Scalar> Coupling<T> {
    pub fn finite(g: T) -> Result<Self> {
        if g.is_finite() {
            Ok(Coupling::Finite(g))
        } else {
            Err(Error::domain("coupling", format!("g = {g} (use the hard-core marker for g → ∞)")))
        }
    }

    /// `1/g`, zero for the hard core, infinite for `g = 0`.
    pub fn inverse(self) -> T {
        match self {
            Coupling::Finite(g) => T::one() / g,
            Coupling::HardCore => T::zero(),
        }
    }

    pub fn is_attractive(self) -> bool {
        matches!(self, Coupling::Finite(g) if g < T::zero())
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Coupling::Finite(g) if g == T::zero())
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Coupling::Finite(g) => g.as_f64(),
            Coupling::HardCore => f64::INFINITY,
        }
    }
}

/// Rejects attractive coupling in `D >= 2`, where no ground state exists.
pub(crate) fn check_collapse<T: Scalar>(dim: Dimension<T>, coupling: Coupling<T>) -> Result<()> {
    if coupling.is_attractive() && dim.value() >= T::lit(2.0) {
        return Err(Error::Collapse { coupling: coupling.as_f64(), dim: dim.value().as_f64() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProblem<T> {
    pub dim: Dimension<T>,
    pub coupling: Coupling<T>,
    /// Highest basis index `K` (the basis has `K + 1` states).
    pub truncation: usize,
    /// Level index `n`.
    pub level: usize,
}

impl<T: Scalar> SpectralProblem<T> {
    pub fn new(dim: Dimension<T>, coupling: Coupling<T>, truncation: usize, level: usize) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::domain("truncation", "K must be at least 1"));
        }
        check_collapse(dim, coupling)?;
        Ok(Self { dim, coupling, truncation, level })
    }

    pub fn ground(dim: Dimension<T>, coupling: Coupling<T>, truncation: usize) -> Result<Self> {
        Self::new(dim, coupling, truncation, 0)
    }

    pub fn with_truncation(self, truncation: usize) -> Result<Self> {
        Self::new(self.dim, self.coupling, truncation, self.level)
    }

    pub fn with_coupling(self, coupling: Coupling<T>) -> Result<Self> {
        Self::new(self.dim, coupling, self.truncation, self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSolution<T> {
    /// `Δ_n = E_n - D/2`.
    pub shift: T,
    pub energy: T,
    /// `|Σ_k |ψ_k(0)|²/(Δ_n - 2k) - 1/g|` at the returned shift.
    pub residual: T,
    pub bracket: (T, T),
    pub iterations: usize,
}

/// The secular sum for a fixed basis, with the weights `|ψ_k(0)|²` cached.
#[derive(Debug, Clone)]
pub struct SecularSum<T> {
    dim: Dimension<T>,
    weights: Vec<T>,
}

impl<T: Scalar> SecularSum<T> {
    pub fn new(truncation: usize, dim: Dimension<T>) -> Self {
        Self { dim, weights: origin_densities(truncation, dim) }
    }

    pub fn truncation(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn dim(&self) -> Dimension<T> {
        self.dim
    }

    /// `|ψ_k(0)|²` for `k = 0..=K`.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    fn check_pole(&self, shift: T) -> Result<()> {
        let half = shift / T::lit(2.0);
        if half >= T::zero() && half == half.round() && half <= T::from_index(self.truncation()) {
            return Err(Error::Pole { shift: shift.as_f64() });
        }
        Ok(())
    }

    /// `Σ_k w_k/(Δ - 2k)`, accumulated from the top of the basis down so the
    /// many small tail terms are summed before the dominant near-pole ones.
    pub fn evaluate(&self, shift: T) -> Result<T> {
        self.check_pole(shift)?;
        Ok(self.sum_powered(T::zero(), shift, 1))
    }

    /// `Σ_k w_k/(Δ - 2k)²`.
    pub fn second_moment(&self, shift: T) -> Result<T> {
        self.check_pole(shift)?;
        Ok(self.sum_powered(T::zero(), shift, 2))
    }

    /// The sum at `Δ = pole + offset` with every denominator formed as
    /// `(pole - 2k) + offset`, so a root right next to `pole` keeps full
    /// relative precision in the offset.
    fn evaluate_offset(&self, pole: T, offset: T) -> Result<T> {
        if offset == T::zero() {
            self.check_pole(pole)?;
        }
        Ok(self.sum_powered(pole, offset, 1))
    }

    fn sum_powered(&self, pole: T, offset: T, power: u8) -> T {
        let two = T::lit(2.0);
        let mut acc = CompensatedSum::new();
        for (k, &w) in self.weights.iter().enumerate().rev() {
            let d = (pole - two * T::from_index(k)) + offset;
            acc.add(if power == 1 { w / d } else { w / (d * d) });
        }
        acc.value()
    }
}

/// `Σ_{k=0}^{K} |ψ_k(0)|²/(Δ - 2k)`.
pub fn secular_lhs<T: Scalar>(shift: T, truncation: usize, dim: Dimension<T>) -> Result<T> {
    SecularSum::new(truncation, dim).evaluate(shift)
}

/// Relative tolerance used by [`solve_shift`], applied to the distance of `Δ`
/// from the lower pole of its bracket.
pub const SHIFT_REL_TOL: f64 = 1e-12;

pub fn solve_shift<T: Scalar>(p: &SpectralProblem<T>) -> Result<SpectralSolution<T>> {
    solve_with(p, &SecularSum::new(p.truncation, p.dim))
}

/// Like [`solve_shift`] but reusing precomputed weights. `sum` must belong
/// to the same dimension and truncation as `p`.
pub fn solve_with<T: Scalar>(p: &SpectralProblem<T>, sum: &SecularSum<T>) -> Result<SpectralSolution<T>> {
    debug_assert_eq!(sum.truncation(), p.truncation);
    check_collapse(p.dim, p.coupling)?;
    let two = T::lit(2.0);
    let n = p.level;
    let nf = T::from_index(n);
    if n >= p.truncation {
        return Err(Error::Bracket(format!(
            "level n = {n} needs the pole at 2n+2 inside the basis (K = {})",
            p.truncation
        )));
    }
    if p.coupling.is_zero() {
        let shift = two * nf;
        return Ok(SpectralSolution {
            shift,
            energy: shift + p.dim.half(),
            residual: T::zero(),
            bracket: (shift, shift),
            iterations: 0,
        });
    }
    let target = p.coupling.inverse();
    let excess = |x: T| sum.evaluate(x).map(|v| v - target);
    // bisect on the offset from the lower pole of the bracket
    let pole = if p.coupling.is_attractive() { (two * nf - two).max(T::zero()) } else { two * nf };
    let excess_at = |x: T| sum.evaluate_offset(pole, x).map(|v| v - target);

    let (lo, hi) = if !p.coupling.is_attractive() {
        (two * nf, two * nf + two)
    } else if n > 0 {
        (two * nf - two, two * nf)
    } else {
        // below the lowest pole the sum rises from -∞ (at 0⁻) towards 0⁻ (at
        // -∞); push the lower end out until it lies above the target
        let mut lo = -two;
        let mut doublings = 0;
        while excess(lo)? <= T::zero() {
            lo = lo * two;
            doublings += 1;
            if doublings > 200 || !lo.is_finite() {
                return Err(Error::Bracket("no bound state below the lowest pole".into()));
            }
        }
        (lo, T::zero())
    };

    let b = bisect_decreasing(excess_at, lo - pole, hi - pole, T::tol(SHIFT_REL_TOL))?;
    let residual = (sum.evaluate_offset(pole, b.root)? - target).abs();
    let shift = pole + b.root;
    Ok(SpectralSolution {
        shift,
        energy: shift + p.dim.half(),
        residual,
        bracket: (lo, hi),
        iterations: b.iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermFit<T> {
    /// Fitted exponent of `|b_k|` against `k`.
    pub exponent: T,
    /// Fitted prefactor `C` in `|b_k| ≈ C k^{exponent}` (reported only).
    pub prefactor: T,
    pub samples: Vec<(usize, T)>,
}

/// Least-squares exponent of the secular-sum terms
/// `b_k = Γ(k + D/2)/(Γ(k+1)(Δ - 2k))` over `k ∈ [k_lo, k_hi]`.
pub fn term_exponent_fit<T: Scalar>(
    dim: Dimension<T>,
    k_lo: usize,
    k_hi: usize,
    shift: T,
    points: usize,
) -> Result<TermFit<T>> {
    if k_lo < 1 || k_lo >= k_hi || points < 2 {
        return Err(Error::domain("term_exponent_fit", format!("k range [{k_lo}, {k_hi}], {points} points")));
    }
    if !(shift > T::zero() && shift < T::lit(2.0)) {
        return Err(Error::domain("term_exponent_fit", format!("Δ = {shift} (need 0 < Δ < 2)")));
    }
    let mut ks: Vec<usize> = geometric_grid(k_lo as f64, k_hi as f64, points)
        .into_iter()
        .map(|k| k.round() as usize)
        .collect();
    ks.dedup();
    let two = T::lit(2.0);
    let mut samples = Vec::with_capacity(ks.len());
    let mut wanted = ks.iter().peekable();
    for (k, ratio) in WeightRatios::new(dim).enumerate().take(k_hi + 1) {
        if wanted.peek() == Some(&&k) {
            wanted.next();
            let b = ratio / (shift - two * T::from_index(k));
            samples.push((k, b.abs()));
        }
    }
    let xs: Vec<T> = samples.iter().map(|(k, _)| T::from_index(*k)).collect();
    let ys: Vec<T> = samples.iter().map(|(_, b)| *b).collect();
    let fit = log_log_fit(&xs, &ys)?;
    Ok(TermFit { exponent: fit.slope, prefactor: fit.intercept.exp(), samples })
}

/// Large-`K` ground energy of the truncated problem:
/// `D/2 + (D-2)Γ(D/2)/(K + D/2)^{(D-2)/2}` for `D > 2`, `1 + 2/(ln K + γ)` for
/// `D = 2`.
pub fn asymptotic_law<T: Scalar>(truncation: usize, dim: Dimension<T>) -> Result<T> {
    let d = dim.value();
    let two = T::lit(2.0);
    if d < two {
        return Err(Error::domain("asymptotic_law", format!("D = {d} (only D >= 2)")));
    }
    if truncation < 2 {
        return Err(Error::domain("asymptotic_law", "K must be at least 2"));
    }
    let k = T::from_index(truncation);
    if d == two {
        return Ok(T::one() + two / (k.ln() + T::euler_gamma()));
    }
    let half = dim.half();
    let g = crate::specfun::gamma(half);
    Ok(half + (d - two) * g / (k + half).powf((d - two) / two))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub truncation: usize,
    pub shift: T,
    /// Asymptotic-law energy, `D >= 2` only.
    pub predicted: Option<T>,
    /// `Δ / (predicted - D/2)`, `D >= 2` only.
    pub ratio: Option<T>,
}

/// One row of [`shift_sweep`].
pub fn sweep_point<T: Scalar>(template: &SpectralProblem<T>, truncation: usize) -> Result<SweepRow<T>> {
    let p = template.with_truncation(truncation)?;
    let sol = solve_shift(&p)?;
    let (predicted, ratio) = if p.dim.value() >= T::lit(2.0) && truncation >= 2 {
        let e = asymptotic_law(truncation, p.dim)?;
        (Some(e), Some(sol.shift / (e - p.dim.half())))
    } else {
        (None, None)
    };
    Ok(SweepRow { truncation, shift: sol.shift, predicted, ratio })
}

/// Solves the template problem for each truncation in a strictly increasing
/// grid.
pub fn shift_sweep<T: Scalar>(template: &SpectralProblem<T>, grid: &[usize]) -> Result<Vec<SweepRow<T>>> {
    check_increasing(grid)?;
    grid.iter().map(|&k| sweep_point(template, k)).collect()
}

pub(crate) fn check_increasing(grid: &[usize]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("K grid", format!("{grid:?} (need a non-empty strictly increasing list)")));
    }
    Ok(())
}

/// First-order perturbation theory: `E_n ≈ 2n + D/2 + g|ψ_n(0)|²`.
pub fn pt_first_order<T: Scalar>(level: usize, coupling: T, dim: Dimension<T>) -> T {
    dim.unperturbed_energy(level) + coupling * psi0_sq(level, dim)
}

/// Second-order correction truncated to the basis `k ≤ K`:
/// `Σ_{k≠n} g² |ψ_k(0)|² |ψ_n(0)|² / (E_n - E_k)`.
pub fn pt_second_order_partial<T: Scalar>(level: usize, coupling: T, dim: Dimension<T>, truncation: usize) -> Result<T> {
    if level > truncation {
        return Err(Error::domain("pt_second_order_partial", format!("n = {level} > K = {truncation}")));
    }
    let w = origin_densities(truncation, dim);
    let two = T::lit(2.0);
    let mut acc = CompensatedSum::new();
    for k in (0..=truncation).rev().filter(|&k| k != level) {
        acc.add(w[k] / (two * (T::from_index(level) - T::from_index(k))));
    }
    Ok(coupling * coupling * w[level] * acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dim(d: f64) -> Dimension<f64> {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn single_term_secular_sum() {
        let v = secular_lhs(1.0, 0, dim(3.0)).unwrap();
        assert!((v - PI.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn pole_is_rejected() {
        assert!(matches!(secular_lhs(4.0, 3, dim(3.0)), Err(Error::Pole { .. })));
        assert!(secular_lhs(8.0, 3, dim(3.0)).is_ok());
        assert!(secular_lhs(-2.0, 3, dim(3.0)).is_ok());
    }

    #[test]
    fn pole_signs_on_both_bracket_ends() {
        let s = SecularSum::new(10, dim(2.5));
        for n in 0..10 {
            let lo = 2.0 * n as f64;
            assert!(s.evaluate(lo + 1e-9).unwrap() > 1e6);
            assert!(s.evaluate(lo + 2.0 - 1e-9).unwrap() < -1e6);
        }
    }

    #[test]
    fn zero_coupling_is_unperturbed() {
        let p = SpectralProblem::new(dim(3.0), Coupling::Finite(0.0), 5, 2).unwrap();
        let s = solve_shift(&p).unwrap();
        assert_eq!(s.shift, 4.0);
        assert_eq!(s.energy, 5.5);
    }

    #[test]
    fn weak_coupling_matches_first_order() {
        let g = 1e-8;
        let p = SpectralProblem::ground(dim(3.0), Coupling::Finite(g), 100).unwrap();
        let s = solve_shift(&p).unwrap();
        let first = g * PI.powf(-1.5);
        assert!(s.shift > 0.0);
        assert!(((s.shift - first) / first).abs() < 1e-6, "{} vs {first}", s.shift);
    }

    #[test]
    fn collapse_regime_is_rejected() {
        for d in [2.0, 3.0] {
            let e = SpectralProblem::ground(dim(d), Coupling::Finite(-1.0), 10).unwrap_err();
            assert!(matches!(e, Error::Collapse { .. }));
            assert!(e.is_domain());
        }
        assert!(SpectralProblem::ground(dim(1.0), Coupling::Finite(-1.0), 10).is_ok());
    }

    #[test]
    fn level_outside_basis_is_a_bracket_error() {
        let p = SpectralProblem::new(dim(3.0), Coupling::Finite(1.0), 4, 4).unwrap();
        assert!(matches!(solve_shift(&p), Err(Error::Bracket(_))));
        assert!(SpectralProblem::ground(dim(3.0), Coupling::Finite(1.0), 0).is_err());
    }

    #[test]
    fn attractive_one_dimensional_levels() {
        let p = SpectralProblem::ground(dim(1.0), Coupling::Finite(-1.0), 2000).unwrap();
        let s = solve_shift(&p).unwrap();
        assert!(s.shift < 0.0);
        let p1 = SpectralProblem::new(dim(1.0), Coupling::Finite(-1.0), 2000, 1).unwrap();
        let s1 = solve_shift(&p1).unwrap();
        assert!(s1.shift > 0.0 && s1.shift < 2.0);
    }

    #[test]
    fn asymptotic_law_values() {
        let v = asymptotic_law(1_000_000, dim(2.0)).unwrap();
        assert!((v - 1.138_959_080_373_709).abs() < 1e-12);
        let v = asymptotic_law(10_000, dim(3.0)).unwrap();
        assert!((v - 1.508_861_604_659_099_5).abs() < 1e-12);
        let v = asymptotic_law(usize::MAX / 4, dim(4.0)).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        assert!(asymptotic_law(100, dim(1.5)).is_err());
    }

    #[test]
    fn first_order_values() {
        assert_eq!(pt_first_order(0, 0.0, dim(3.0)), 1.5);
        assert!((pt_first_order(0, 1.0, dim(3.0)) - (1.5 + PI.powf(-1.5))).abs() < 1e-15);
        assert!((pt_first_order(1, 1.0, dim(2.0)) - (3.0 + 1.0 / PI)).abs() < 1e-15);
    }

    #[test]
    fn sweep_requires_increasing_grid() {
        let p = SpectralProblem::ground(dim(3.0), Coupling::HardCore, 10).unwrap();
        assert!(shift_sweep(&p, &[10, 10]).is_err());
        assert!(shift_sweep(&p, &[]).is_err());
        let rows = shift_sweep(&p, &[10, 100]).unwrap();
        assert!(rows[1].shift < rows[0].shift);
        assert!(rows[0].ratio.is_some());
    }

    #[test]
    fn f32_solve_brackets_correctly() {
        let d = Dimension::new(3.0f32).unwrap();
        let p = SpectralProblem::ground(d, Coupling::Finite(1.0f32), 20).unwrap();
        let s = solve_shift(&p).unwrap();
        assert!(s.shift > 0.0 && s.shift < 2.0);
        let p64 = SpectralProblem::ground(dim(3.0), Coupling::Finite(1.0), 20).unwrap();
        assert!((s.shift as f64 - solve_shift(&p64).unwrap().shift).abs() < 1e-5);
    }

    #[test]
    fn resolves_roots_next_to_a_pole() {
        // the partial sum is ~1e6 here, so doubling g moves Δ by a few ulps
        let p = SpectralProblem::new(dim(5.741668593722098), Coupling::Finite(674.0), 3769, 19).unwrap();
        let weak = solve_shift(&p).unwrap();
        let strong = solve_shift(&p.with_coupling(Coupling::Finite(1348.0)).unwrap()).unwrap();
        assert!(strong.shift > weak.shift);
        assert!(weak.shift - 38.0 > 0.0 && weak.shift - 38.0 < 1e-3);
    }
}
