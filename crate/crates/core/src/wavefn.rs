//! Truncated-basis wave functions.
//!
//! With the shift `Δ` solved, the expansion coefficients follow in closed
//! form,
//!
//! ```text
//! c_k = ψ_k(0)/(Δ - 2k) / sqrt(Σ_i |ψ_i(0)|²/(Δ - 2i)²),
//! ```
//!
//! and the value at the origin collapses to
//! `ψ(0) = (1/g) / sqrt(Σ_i |ψ_i(0)|²/(Δ - 2i)²)`, which is how the origin
//! trace reaches large `K` without any grid work.

use crate::error::{Error, Result};
use crate::specfun::{origin_densities, radial_basis_into, radial_eigenfunction, Dimension};
use crate::spectral::{solve_with, Coupling, SecularSum, SpectralProblem, SpectralSolution};
use crate::summation::{compensated_sum, CompensatedSum};
use crate::Scalar;

/// Main figure grid: `r ∈ [0, 4]`, 401 points.
pub const FIGURE_GRID: (f64, f64, usize) = (0.0, 4.0, 401);
/// Inset grid for the small-distance region: `r ∈ [0, 0.2]`, 201 points.
pub const INSET_GRID: (f64, f64, usize) = (0.0, 0.2, 201);
/// Truncations drawn in the ground-state figure.
pub const FIGURE_TRUNCATIONS: [usize; 5] = [1, 5, 20, 100, 400];

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunctionExpansion<T> {
    pub dim: Dimension<T>,
    pub truncation: usize,
    pub energy: T,
    coeffs: Vec<T>,
}

impl<T: Scalar> WaveFunctionExpansion<T> {
    /// The unperturbed eigenstate `ψ_n` written in a basis of size `K + 1`.
    pub fn unperturbed(dim: Dimension<T>, truncation: usize, level: usize) -> Result<Self> {
        if level > truncation {
            return Err(Error::domain("unperturbed", format!("n = {level} > K = {truncation}")));
        }
        let mut coeffs = vec![T::zero(); truncation + 1];
        coeffs[level] = T::one();
        Ok(Self { dim, truncation, energy: dim.unperturbed_energy(level), coeffs })
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> T {
        compensated_sum(self.coeffs.iter().map(|&c| c * c))
    }

    /// `Σ_k c_k ψ_k(r)` at every grid point.
    pub fn evaluate(&self, grid: &[T]) -> Result<Vec<T>> {
        let mut basis = Vec::with_capacity(self.truncation + 1);
        grid.iter()
            .map(|&r| {
                if !(r >= T::zero()) || !r.is_finite() {
                    return Err(Error::domain("evaluate", format!("r = {r}")));
                }
                radial_basis_into(self.dim, r, self.truncation, &mut basis);
                let mut acc = CompensatedSum::new();
                for (c, b) in self.coeffs.iter().zip(&basis) {
                    acc.add(*c * *b);
                }
                Ok(acc.value())
            })
            .collect()
    }

    pub fn value_at(&self, r: T) -> Result<T> {
        Ok(self.evaluate(&[r])?[0])
    }

    /// `Σ_k c_k ψ_k(0)`.
    pub fn origin_value(&self) -> T {
        let w = origin_densities(self.truncation, self.dim);
        compensated_sum(self.coeffs.iter().zip(&w).map(|(c, w)| *c * w.sqrt()))
    }

    /// Smallest grid radius beyond which `|ψ_K - ψ_0| <= rel·ψ_0` holds at
    /// every grid point where `ψ_0` is above 1e-3 of its peak. Descriptive
    /// only: the convergence towards `ψ_0` is not uniform near the origin.
    pub fn boundary_layer_width(&self, grid: &[T], rel: T) -> Result<Option<T>> {
        let vals = self.evaluate(grid)?;
        let peak = radial_eigenfunction(0, self.dim, T::zero())?;
        let mut width = None;
        for (&r, &v) in grid.iter().zip(&vals).rev() {
            let reference = radial_eigenfunction(0, self.dim, r)?;
            if reference < T::lit(1e-3) * peak {
                continue;
            }
            if (v - reference).abs() > rel * reference {
                break;
            }
            width = Some(r);
        }
        Ok(width)
    }
}

/// Coefficients of the truncated eigenstate with the solved shift.
///
/// Fails with a pole error when the energy coincides with an unperturbed
/// level (use [`WaveFunctionExpansion::unperturbed`] for `g = 0`).
pub fn reconstruct<T: Scalar>(
    sol: &SpectralSolution<T>,
    truncation: usize,
    dim: Dimension<T>,
) -> Result<WaveFunctionExpansion<T>> {
    let two = T::lit(2.0);
    let shift = sol.shift;
    let half = shift / two;
    if half >= T::zero() && half == half.round() && half <= T::from_index(truncation) {
        return Err(Error::Pole { shift: shift.as_f64() });
    }
    let raw: Vec<T> = origin_densities(truncation, dim)
        .into_iter()
        .enumerate()
        .map(|(k, w)| w.sqrt() / (shift - two * T::from_index(k)))
        .collect();
    // rescale before squaring: near-pole coefficients can be huge
    let peak = raw.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    let scaled: Vec<T> = raw.iter().map(|&c| c / peak).collect();
    let norm = compensated_sum(scaled.iter().map(|&c| c * c)).sqrt();
    Ok(WaveFunctionExpansion {
        dim,
        truncation,
        energy: sol.energy,
        coeffs: scaled.into_iter().map(|c| c / norm).collect(),
    })
}

/// Solves the problem and reconstructs its wave function; `g = 0` yields the
/// unperturbed state.
pub fn expansion_for<T: Scalar>(p: &SpectralProblem<T>) -> Result<(SpectralSolution<T>, WaveFunctionExpansion<T>)> {
    let sum = SecularSum::new(p.truncation, p.dim);
    let sol = solve_with(p, &sum)?;
    let w = if p.coupling.is_zero() {
        WaveFunctionExpansion::unperturbed(p.dim, p.truncation, p.level)?
    } else {
        reconstruct(&sol, p.truncation, p.dim)?
    };
    Ok((sol, w))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginRow<T> {
    pub truncation: usize,
    pub shift: T,
    pub psi0: T,
}

/// `ψ(0)` of the truncated ground state, from the closed form.
pub fn origin_point<T: Scalar>(dim: Dimension<T>, coupling: Coupling<T>, truncation: usize) -> Result<OriginRow<T>> {
    let p = SpectralProblem::ground(dim, coupling, truncation)?;
    let sum = SecularSum::new(truncation, dim);
    let sol = solve_with(&p, &sum)?;
    let psi0 = if coupling.is_zero() {
        radial_eigenfunction(0, dim, T::zero())?
    } else {
        coupling.inverse() / sum.second_moment(sol.shift)?.sqrt()
    };
    Ok(OriginRow { truncation, shift: sol.shift, psi0 })
}

pub fn origin_trace<T: Scalar>(dim: Dimension<T>, coupling: Coupling<T>, grid: &[usize]) -> Result<Vec<OriginRow<T>>> {
    crate::spectral::check_increasing(grid)?;
    grid.iter().map(|&k| origin_point(dim, coupling, k)).collect()
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn uniform_grid<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n < 2 {
        return vec![lo];
    }
    let step = (hi - lo) / T::from_index(n - 1);
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * T::from_index(i) }).collect()
}

/// Ground-state curves for several truncations plus the unperturbed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData<T> {
    pub grid: Vec<T>,
    pub truncations: Vec<usize>,
    /// One column per truncation, aligned with `grid`.
    pub curves: Vec<Vec<T>>,
    pub unperturbed: Vec<T>,
}

pub fn figure_data<T: Scalar>(
    dim: Dimension<T>,
    coupling: Coupling<T>,
    truncations: &[usize],
    grid: &[T],
) -> Result<FigureData<T>> {
    let curves = truncations
        .iter()
        .map(|&k| {
            let p = SpectralProblem::ground(dim, coupling, k)?;
            expansion_for(&p)?.1.evaluate(grid)
        })
        .collect::<Result<Vec<_>>>()?;
    let unperturbed = grid.iter().map(|&r| radial_eigenfunction(0, dim, r)).collect::<Result<Vec<_>>>()?;
    Ok(FigureData { grid: grid.to_vec(), truncations: truncations.to_vec(), curves, unperturbed })
}
