//! Gaussian-regularized contact term in the truncated oscillator basis.
//!
//! The contact is smoothed to `δ_ε(r) = (√π ε)^{-D} e^{-r²/ε²}` and the
//! Hamiltonian is assembled as a dense matrix,
//!
//! ```text
//! M_ij = (2i + D/2) δ_ij + g S_{D-1} ∫ ψ_i ψ_j δ_ε r^{D-1} dr.
//! ```
//!
//! With `r = εs` the matrix element becomes
//! `g S_{D-1} π^{-D/2} ∫ ψ_i(εs) ψ_j(εs) e^{-s²} s^{D-1} ds`, which is
//! integrated over `s ∈ (0, 7)`; the Gaussian weight is below `1e-21` past
//! the cutoff. As `ε → 0` the matrix tends to the rank-one update
//! `diag(2i + D/2) + g ψ_i(0) ψ_j(0)`, whose eigenvalues are exactly the
//! secular-equation roots.

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigenvalues, SquareMatrix};
use crate::quadrature::{tanh_sinh_many, QuadOptions};
use crate::specfun::{origin_densities, radial_basis_into, Dimension};
use crate::spectral::{solve_shift, Coupling, SpectralProblem};
use crate::Scalar;

const SCALED_CUTOFF: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedProblem<T> {
    pub dim: Dimension<T>,
    pub coupling: T,
    /// Width of the Gaussian, in oscillator length units.
    pub width: T,
    pub truncation: usize,
}

impl<T: Scalar> RegularizedProblem<T> {
    pub fn new(dim: Dimension<T>, coupling: T, width: T, truncation: usize) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(Error::domain("coupling", format!("g = {coupling}")));
        }
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::domain("width", format!("epsilon = {width} must be positive")));
        }
        if truncation < 1 {
            return Err(Error::domain("truncation", "K must be at least 1"));
        }
        Ok(Self { dim, coupling, width, truncation })
    }
}

/// Dense Hamiltonian with the Gaussian contact term.
pub fn delta_eps_matrix<T: Scalar>(p: &RegularizedProblem<T>) -> Result<SquareMatrix<T>> {
    let n = p.truncation + 1;
    let dim = p.dim;
    let packed_len = n * (n + 1) / 2;
    let mut basis = Vec::with_capacity(n);
    let opts = QuadOptions::default().with_abs_tol(T::tol(1e-14));
    let overlaps = tanh_sinh_many(
        |s: T, out: &mut [T]| {
            radial_basis_into(dim, p.width * s, p.truncation, &mut basis);
            let weight = (-s * s).exp() * s.powf(dim.value() - T::one());
            let mut packed = out.iter_mut();
            for (i, &b) in basis.iter().enumerate() {
                let bi = b * weight;
                for (&bj, slot) in basis[i..].iter().zip(packed.by_ref()) {
                    *slot = bi * bj;
                }
            }
        },
        T::zero(),
        T::lit(SCALED_CUTOFF),
        packed_len,
        &opts,
    )?;
    let scale = p.coupling * dim.sphere_area() * T::PI().powf(-dim.half());
    let mut m = SquareMatrix::zeros(n);
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            let mut v = scale * overlaps[idx];
            if i == j {
                v = v + dim.unperturbed_energy(i);
            }
            m.set(i, j, v);
            m.set(j, i, v);
            idx += 1;
        }
    }
    Ok(m)
}

/// `diag(2i + D/2) + g v vᵀ` with `v_i = ψ_i(0)`: the zero-width limit.
pub fn rank_one_limit_matrix<T: Scalar>(dim: Dimension<T>, coupling: T, truncation: usize) -> SquareMatrix<T> {
    let v: Vec<T> = origin_densities(truncation, dim).into_iter().map(|w| w.sqrt()).collect();
    SquareMatrix::symmetric_from_fn(truncation + 1, |i, j| {
        let contact = coupling * v[i] * v[j];
        if i == j {
            dim.unperturbed_energy(i) + contact
        } else {
            contact
        }
    })
}

/// The `count` smallest eigenvalues, ascending.
pub fn eigen_lowest<T: Scalar>(m: &SquareMatrix<T>, count: usize) -> Result<Vec<T>> {
    if count == 0 || count > m.dim() {
        return Err(Error::domain("eigen_lowest", format!("count {count} for a {}x{} matrix", m.dim(), m.dim())));
    }
    let mut all = jacobi_eigenvalues(m)?;
    all.truncate(count);
    Ok(all)
}

/// Lowest eigenvalue of the regularized Hamiltonian.
pub fn ground_energy<T: Scalar>(p: &RegularizedProblem<T>) -> Result<T> {
    Ok(eigen_lowest(&delta_eps_matrix(p)?, 1)?[0])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow<T> {
    /// Zero marks the contact limit taken before the truncation limit.
    pub width: T,
    pub truncation: usize,
    pub energy: T,
}

/// Ground energy on every `(ε, K)` pair, followed by the zero-width rows
/// from the secular equation (omitted when the contact limit collapses).
pub fn double_limit_study<T: Scalar>(
    dim: Dimension<T>,
    coupling: T,
    widths: &[T],
    truncations: &[usize],
) -> Result<Vec<StudyRow<T>>> {
    crate::spectral::check_increasing(truncations)?;
    if widths.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain("width grid", "epsilon values must be strictly decreasing"));
    }
    let mut rows = Vec::with_capacity((widths.len() + 1) * truncations.len());
    for &width in widths {
        for &k in truncations {
            let p = RegularizedProblem::new(dim, coupling, width, k)?;
            rows.push(StudyRow { width, truncation: k, energy: ground_energy(&p)? });
        }
    }
    for &k in truncations {
        match SpectralProblem::ground(dim, Coupling::Finite(coupling), k) {
            Ok(p) => {
                let sol = solve_shift(&p)?;
                rows.push(StudyRow { width: T::zero(), truncation: k, energy: sol.energy });
            }
            Err(Error::Collapse { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}
