//! Infinite spherical well of radius `R` with a constant repulsive core.
//!
//! The core occupies `r < ε` with height `V₀ = 3g/(4πε³)`, so its volume
//! integral is `g` and it tends to `g δ(r)` as `ε → 0`. Units are `ħ = 1`,
//! `2m = 1`, so `E = k²`. Writing `u = rψ`, the s-wave ground state is
//!
//! ```text
//! u(r) = c sinh(λr),     r < ε,   λ = sqrt(V₀ - k²)
//! u(r) = sin(k(R - r)),  ε < r < R
//! ```
//!
//! and `k` solves `λ coth(λε) = -k cot(k(R - ε))`. The root lies between
//! the empty-well value `π/R` and the hard-core value `π/(R - ε)`. If the
//! core is too low to confine (`V₀ < k²`) the interior is oscillatory and
//! the same condition holds with `λ coth(λε)` continued to `q cot(qε)`.

use crate::error::{Error, Result};
use crate::roots::bisect_decreasing;
use crate::spectral::Coupling;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellModel<T> {
    pub radius: T,
    /// Core radius.
    pub width: T,
    pub coupling: Coupling<T>,
}

/// Shape of the solution inside the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteriorBranch {
    /// `sinh(λr)`: the core height exceeds the energy.
    Evanescent,
    /// `sin(qr)`: the energy is above the core.
    Oscillatory,
    /// `ψ ≡ 0` inside (hard core).
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSolution<T> {
    pub k: T,
    pub energy: T,
    /// Relative defect of the log-derivative match at `r = ε`.
    pub residual: T,
    /// `c` in `u = c sinh(λr)` (or `c sin(qr)`), with the exterior
    /// amplitude fixed to one.
    pub interior_amplitude: T,
    /// `λ` (or `q` on the oscillatory branch).
    pub interior_wavenumber: T,
    pub branch: InteriorBranch,
    gap: T,
    model: WellModel<T>,
}

impl<T: Scalar> WellModel<T> {
    pub fn new(radius: T, width: T, coupling: Coupling<T>) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::domain("radius", format!("R = {radius}")));
        }
        if !(width > T::zero() && width < radius) {
            return Err(Error::domain("width", format!("need 0 < epsilon < R, got epsilon = {width}, R = {radius}")));
        }
        if let Coupling::Finite(g) = coupling {
            if g < T::zero() {
                return Err(Error::domain("coupling", format!("the barrier model needs g >= 0, got {g}")));
            }
        }
        Ok(Self { radius, width, coupling })
    }

    /// `3g/(4πε³)`; infinite for the hard core.
    pub fn barrier_height(&self) -> T {
        match self.coupling {
            Coupling::HardCore => T::infinity(),
            Coupling::Finite(g) => T::lit(3.0) * g / (T::lit(4.0) * T::PI() * self.width.powi(3)),
        }
    }

    pub fn unperturbed_energy(&self) -> T {
        (T::PI() / self.radius).powi(2)
    }

    pub fn hard_core_energy(&self) -> T {
        (T::PI() / (self.radius - self.width)).powi(2)
    }
}

/// `y coth y`, continuous through `y = 0`.
fn x_coth_x<T: Scalar>(y: T) -> T {
    if y.abs() < T::lit(1e-4) {
        T::one() + y * y / T::lit(3.0)
    } else if y > T::lit(20.0) {
        y
    } else {
        y / y.tanh()
    }
}

/// `y cot y`, continuous through `y = 0`.
fn x_cot_x<T: Scalar>(y: T) -> T {
    if y.abs() < T::lit(1e-4) {
        T::one() - y * y / T::lit(3.0)
    } else {
        y / y.tan()
    }
}

/// `ln sinh y` for `y > 0` without overflow.
fn ln_sinh<T: Scalar>(y: T) -> T {
    if y > T::lit(20.0) {
        y + (-(T::lit(-2.0) * y).exp()).ln_1p() - T::LN_2()
    } else {
        y.sinh().ln()
    }
}

/// Interior log-derivative `u'/u` at `r = ε` as an analytic function of
/// `λ² = V₀ - k²`.
fn interior_log_derivative<T: Scalar>(lambda_sq: T, width: T) -> T {
    if lambda_sq >= T::zero() {
        x_coth_x(lambda_sq.sqrt() * width) / width
    } else {
        x_cot_x((-lambda_sq).sqrt() * width) / width
    }
}

pub fn solve_well<T: Scalar>(m: &WellModel<T>) -> Result<WellSolution<T>> {
    let (r, eps) = (m.radius, m.width);
    let outer = r - eps;
    let g = match m.coupling {
        Coupling::HardCore => {
            let k = T::PI() / outer;
            return Ok(WellSolution {
                k,
                energy: k * k,
                residual: T::zero(),
                interior_amplitude: T::zero(),
                interior_wavenumber: T::infinity(),
                branch: InteriorBranch::Excluded,
                gap: T::zero(),
                model: *m,
            });
        }
        Coupling::Finite(g) => g,
    };
    let v0 = m.barrier_height();
    // unknown: the gap s = π - k(R-ε) to the hard-core phase, which keeps
    // full relative precision when the root crowds the hard-core end
    let wavenumber = |gap: T| (T::PI() - gap) / outer;
    let gap = if g == T::zero() {
        T::PI() * eps / r
    } else {
        // λ coth(λε) = k cot(s), multiplied through by sin s > 0
        let matching = |gap: T| -> Result<T> {
            let k = wavenumber(gap);
            Ok(k * gap.cos() - interior_log_derivative(v0 - k * k, eps) * gap.sin())
        };
        bisect_decreasing(matching, T::zero(), T::PI() * eps / r, T::zero())?.root
    };
    let k = if g == T::zero() { T::PI() / r } else { wavenumber(gap) };

    let lambda_sq = v0 - k * k;
    let inner = interior_log_derivative(lambda_sq, eps);
    let outer_ld = k / gap.tan();
    let residual = (inner - outer_ld).abs() / inner.abs().max(outer_ld.abs()).max(k);
    let (branch, wavenumber, amplitude) = if g == T::zero() {
        (InteriorBranch::Oscillatory, k, T::one())
    } else if lambda_sq >= T::zero() {
        let lambda = lambda_sq.sqrt();
        (InteriorBranch::Evanescent, lambda, (gap.sin().ln() - ln_sinh(lambda * eps)).exp())
    } else {
        let q = (-lambda_sq).sqrt();
        (InteriorBranch::Oscillatory, q, gap.sin() / (q * eps).sin())
    };
    Ok(WellSolution {
        k,
        energy: k * k,
        residual,
        interior_amplitude: amplitude,
        interior_wavenumber: wavenumber,
        branch,
        gap,
        model: *m,
    })
}

impl<T: Scalar> WellSolution<T> {
    /// `ψ(r) = u(r)/r`, exterior amplitude one; zero outside the well.
    pub fn psi(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) {
            return Err(Error::domain("psi", format!("r = {r}")));
        }
        let WellModel { radius, width, .. } = self.model;
        if r >= radius {
            return Ok(T::zero());
        }
        if r >= width {
            return Ok((self.k * (radius - r)).sin() / r);
        }
        if r == T::zero() {
            return Ok(self.origin_value());
        }
        let w = self.interior_wavenumber;
        Ok(match self.branch {
            InteriorBranch::Excluded => T::zero(),
            InteriorBranch::Evanescent => {
                // c sinh(λr) = exp(ln c + ln sinh λr), stable for large λε
                (self.interior_amplitude.ln() + ln_sinh(w * r)).exp() / r
            }
            InteriorBranch::Oscillatory => self.interior_amplitude * (w * r).sin() / r,
        })
    }

    /// `ψ(0) = cλ` (or `cq`).
    pub fn origin_value(&self) -> T {
        match self.branch {
            InteriorBranch::Excluded => T::zero(),
            InteriorBranch::Evanescent => self.ln_origin_value().exp(),
            InteriorBranch::Oscillatory => self.interior_amplitude * self.interior_wavenumber,
        }
    }

    /// `ln ψ(0)`, finite even when `ψ(0)` underflows; `-∞` for the hard core.
    pub fn ln_origin_value(&self) -> T {
        match self.branch {
            InteriorBranch::Excluded => T::neg_infinity(),
            InteriorBranch::Evanescent => {
                let lambda = self.interior_wavenumber;
                self.gap.sin().ln() - ln_sinh(lambda * self.model.width) + lambda.ln()
            }
            InteriorBranch::Oscillatory => self.origin_value().ln(),
        }
    }
}

fn check_decreasing<T: Scalar>(widths: &[T]) -> Result<()> {
    if widths.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain("width grid", "epsilon values must be strictly decreasing"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionRow<T> {
    pub width: T,
    pub energy: T,
    /// `π²/(R-ε)² · (1 - 2 sqrt(4πε/(3g)) ε/R)`.
    pub predicted: T,
    /// Observed over predicted relative correction; `None` for the hard
    /// core, where the predicted correction vanishes.
    pub ratio: Option<T>,
}

pub fn expansion_check<T: Scalar>(radius: T, coupling: Coupling<T>, widths: &[T]) -> Result<Vec<ExpansionRow<T>>> {
    check_decreasing(widths)?;
    widths
        .iter()
        .map(|&eps| {
            let m = WellModel::new(radius, eps, coupling)?;
            let sol = solve_well(&m)?;
            let hard = m.hard_core_energy();
            let correction = match coupling {
                Coupling::HardCore => T::zero(),
                Coupling::Finite(g) => {
                    -T::lit(2.0) * (T::lit(4.0) * T::PI() * eps / (T::lit(3.0) * g)).sqrt() * eps / radius
                }
            };
            let observed = sol.energy / hard - T::one();
            let ratio = if correction == T::zero() || !correction.is_finite() { None } else { Some(observed / correction) };
            Ok(ExpansionRow { width: eps, energy: sol.energy, predicted: hard * (T::one() + correction), ratio })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuppressionRow<T> {
    pub width: T,
    pub psi0: T,
    pub ln_psi0: T,
    /// `(2π/R) exp(-sqrt(3g/(4πε)))`.
    pub predicted: T,
}

/// Origin value of the ground state across core widths. Only the confining
/// (evanescent) regime is modeled; a low core is a branch error.
pub fn origin_suppression<T: Scalar>(radius: T, coupling: Coupling<T>, widths: &[T]) -> Result<Vec<SuppressionRow<T>>> {
    check_decreasing(widths)?;
    widths
        .iter()
        .map(|&eps| {
            let sol = solve_well(&WellModel::new(radius, eps, coupling)?)?;
            if sol.branch == InteriorBranch::Oscillatory {
                return Err(Error::Branch(format!(
                    "core height {} below k² = {} at epsilon = {eps}",
                    sol.model.barrier_height(),
                    sol.energy
                )));
            }
            let predicted = match coupling {
                Coupling::HardCore => T::zero(),
                Coupling::Finite(g) => {
                    T::lit(2.0) * T::PI() / radius * (-(T::lit(3.0) * g / (T::lit(4.0) * T::PI() * eps)).sqrt()).exp()
                }
            };
            Ok(SuppressionRow { width: eps, psi0: sol.origin_value(), ln_psi0: sol.ln_origin_value(), predicted })
        })
        .collect()
}
