//! Numerical laboratory for repulsive contact (δ-like) interactions in `D`
//! dimensions.
//!
//! The crate solves the oscillator-plus-contact problem
//! `(-½Δ + ½r² + g δ(r)) ψ = E ψ` in truncated oscillator bases, with a
//! smooth Gaussian regularization, and in an exactly solvable spherical well,
//! and evaluates variational bounds built from short-range correlation
//! factors. Together they show that for `D >= 2` a repulsive contact term
//! leaves the spectrum unchanged once the basis (or the trial function) can
//! resolve short distances, while for `D = 1` it produces finite shifts.
//!
//! Numerical routines are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod linalg;
pub mod quadrature;
pub mod regularized;
mod roots;
pub mod scalar;
pub mod specfun;
pub mod spectral;
pub mod summation;
pub mod variational;
pub mod wavefn;
pub mod wellbarrier;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use specfun::Dimension;
pub use regularized::RegularizedProblem;
pub use spectral::{Coupling, SpectralProblem, SpectralSolution};
pub use variational::{CorrelationFactor, NbodyConfig, VariationalEstimate};
pub use wavefn::WaveFunctionExpansion;
pub use wellbarrier::{WellModel, WellSolution};

pub type Dimension64 = specfun::Dimension<f64>;
pub type Coupling64 = spectral::Coupling<f64>;
pub type SpectralProblem64 = spectral::SpectralProblem<f64>;
pub type SpectralSolution64 = spectral::SpectralSolution<f64>;
pub type WaveFunctionExpansion64 = wavefn::WaveFunctionExpansion<f64>;
pub type RegularizedProblem64 = regularized::RegularizedProblem<f64>;
pub type WellModel64 = wellbarrier::WellModel<f64>;
pub type WellSolution64 = wellbarrier::WellSolution<f64>;
pub type CorrelationFactor64 = variational::CorrelationFactor<f64>;
pub type VariationalEstimate64 = variational::VariationalEstimate<f64>;
