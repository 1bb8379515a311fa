//! Variational upper bounds from short-range correlation factors.
//!
//! A trial state `f(r)ψ₀` with `f(0) = 0` satisfies any contact boundary
//! condition, so
//!
//! ```text
//! E <= E₀ + (½∫|ψ₀|² (∇f)²) / (∫|ψ₀|² f²)
//! ```
//!
//! bounds the contact problem from above. The numerator is reported as
//! `correction`, the denominator as `norm`. Shrinking the factor's range
//! drives the excess to zero like `b^{D-2}` for `D > 2`; in `D = 2` the
//! logarithmically slow factor `1 - exp(-(βr)^{1/α})` does the same with
//! kinetic integral `π/(4α)`.
//!
//! The many-particle product `F = Π_{i<j} f(r_ij)` is handled by direct
//! Monte Carlo sampling of the Gaussian `|Ψ₀|²` in [`nbody_bound_mc`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fit::{log_log_fit, LinearFit};
use crate::quadrature::{log_radial, sinh_sinh, QuadOptions};
use crate::specfun::{log_gamma, radial_eigenfunction, Dimension};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelationFactor<T> {
    /// `1 - exp(-(βr)^{1/α})` with `ln β = e^α`.
    TwoD { alpha: T },
    /// `1 - exp(-(r/b)²)`.
    Gaussian { range: T },
    /// `f ≡ 1`.
    Uncorrelated,
}

impl<T: Scalar> CorrelationFactor<T> {
    pub fn two_d(alpha: T) -> Result<Self> {
        if !(alpha > T::one()) || !alpha.is_finite() {
            return Err(Error::domain("alpha", format!("need alpha > 1 (beta > e^e), got {alpha}")));
        }
        Ok(Self::TwoD { alpha })
    }

    /// Two-dimensional factor from its scale `β`, with `α = ln(ln β)`.
    pub fn two_d_from_scale(beta: T) -> Result<Self> {
        if !(beta > T::one()) {
            return Err(Error::domain("beta", format!("need beta > e^e, got {beta}")));
        }
        Self::two_d(beta.ln().ln())
    }

    pub fn gaussian(range: T) -> Result<Self> {
        if !(range > T::zero()) || range.is_nan() {
            return Err(Error::domain("range", format!("need b > 0, got {range}")));
        }
        if range.is_infinite() {
            return Ok(Self::Uncorrelated);
        }
        Ok(Self::Gaussian { range })
    }

    /// `ln β = e^α` of the two-dimensional factor.
    pub fn ln_scale(&self) -> Option<T> {
        match *self {
            Self::TwoD { alpha } => Some(alpha.exp()),
            _ => None,
        }
    }

    /// `(f(r), f'(r))`. The two-dimensional factor has an infinite slope at
    /// the origin.
    pub fn eval(&self, r: T) -> Result<(T, T)> {
        if !(r >= T::zero()) {
            return Err(Error::domain("factor", format!("r = {r}")));
        }
        Ok(match *self {
            Self::Uncorrelated => (T::one(), T::zero()),
            Self::Gaussian { range } => {
                let x = r / range;
                if x > T::lit(40.0) {
                    return Ok((T::one(), T::zero()));
                }
                let e = (-x * x).exp();
                (-(-x * x).exp_m1(), T::lit(2.0) * x / range * e)
            }
            Self::TwoD { alpha } => {
                if r == T::zero() {
                    return Ok((T::zero(), T::infinity()));
                }
                let t = ((alpha.exp() + r.ln()) / alpha).exp();
                if t > T::lit(800.0) {
                    return Ok((T::one(), T::zero()));
                }
                (-(-t).exp_m1(), t * (-t).exp() / (alpha * r))
            }
        })
    }
}

/// `(f, f')` at `r`.
pub fn factor_eval<T: Scalar>(c: &CorrelationFactor<T>, r: T) -> Result<(T, T)> {
    c.eval(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalEstimate<T> {
    pub e0: T,
    /// `½∫|ψ₀|²(∇f)²`; a sample mean on the Monte Carlo path.
    pub correction: T,
    /// `∫|ψ₀|² f²`.
    pub norm: T,
    /// Standard error of `correction/norm`; zero for quadrature.
    pub stderr: T,
    /// Accepted Monte Carlo samples; zero for quadrature.
    pub samples: u64,
    pub rejected: u64,
    pub seed: Option<u64>,
}

impl<T: Scalar> VariationalEstimate<T> {
    pub fn excess(&self) -> T {
        self.correction / self.norm
    }

    pub fn bound(&self) -> T {
        self.e0 + self.excess()
    }
}

fn radial_options<T: Scalar>() -> QuadOptions<T> {
    QuadOptions::default().with_rel_tol(T::tol(1e-12))
}

/// `½∫(∇f)² d²r` for the two-dimensional factor; equals `π/(4α)`.
pub fn kinetic_integral_2d<T: Scalar>(alpha: T) -> Result<T> {
    CorrelationFactor::two_d(alpha)?;
    // with v = ln(βr), t = e^{v/α}: π ∫ f'² r dr = π ∫ t² e^{-2t} / α² dv
    let q = sinh_sinh(
        |v: T| {
            let t = (v / alpha).exp();
            (T::lit(2.0) * (v / alpha - t)).exp()
        },
        &radial_options(),
    )?;
    Ok(T::PI() * q.value / (alpha * alpha))
}

/// `1 - ∫ρ f² d²r` for a radial density `ρ`, using the two-dimensional
/// factor.
pub fn norm_defect_2d_with<T: Scalar>(alpha: T, density: impl Fn(T) -> T) -> Result<T> {
    CorrelationFactor::two_d(alpha)?;
    let ln_beta = alpha.exp();
    // 1 - f² = e^{-t}(2 - e^{-t}); with r = e^{v}/β, r dr = e^{2v}/β² dv
    let q = sinh_sinh(
        |v: T| {
            let e = (-(v / alpha).exp()).exp();
            let ln_r = v - ln_beta;
            let area = (T::lit(2.0) * ln_r).exp();
            if e == T::zero() || area == T::zero() {
                return T::zero();
            }
            density(ln_r.exp()) * e * (T::lit(2.0) - e) * area
        },
        &radial_options(),
    )?;
    Ok(T::lit(2.0) * T::PI() * q.value)
}

/// Norm defect against the two-dimensional oscillator ground state.
pub fn norm_defect_2d<T: Scalar>(alpha: T) -> Result<T> {
    norm_defect_2d_with(alpha, |r: T| (-r * r).exp() / T::PI())
}

/// `ln(αΓ(2α)/β²)`, the order of the two-dimensional norm defect.
pub fn ln_defect_scale_2d<T: Scalar>(alpha: T) -> Result<T> {
    Ok(alpha.ln() + log_gamma(T::lit(2.0) * alpha)? - T::lit(2.0) * alpha.exp())
}

fn ground_density<T: Scalar>(dim: Dimension<T>, r: T) -> T {
    // S_{D-1} π^{-D/2} e^{-r²} r^{D-1}
    dim.sphere_area() * T::PI().powf(-dim.half()) * ((dim.value() - T::one()) * r.ln() - r * r).exp()
}

/// Two-particle bound (relative coordinate, oscillator ground state) with
/// a factor of any kind, by radial quadrature.
pub fn two_particle_estimate<T: Scalar>(dim: Dimension<T>, factor: CorrelationFactor<T>) -> Result<VariationalEstimate<T>> {
    let opts = radial_options();
    let (correction, defect) = match factor {
        CorrelationFactor::Uncorrelated => (T::zero(), T::zero()),
        CorrelationFactor::Gaussian { range } => {
            let c = log_radial(
                |r| {
                    let (_, fp) = factor.eval(r).unwrap_or((T::zero(), T::zero()));
                    T::lit(0.5) * fp * fp * ground_density(dim, r)
                },
                range,
                &opts,
            )?;
            let d = log_radial(
                |r| {
                    let e = (-(r / range).powi(2)).exp();
                    e * (T::lit(2.0) - e) * ground_density(dim, r)
                },
                range,
                &opts,
            )?;
            (c.value, d.value)
        }
        CorrelationFactor::TwoD { alpha } => {
            if dim.value() != T::lit(2.0) {
                return Err(Error::domain("factor", "the logarithmic factor is for D = 2"));
            }
            let c = kinetic_integral_2d_weighted(alpha)?;
            (c, norm_defect_2d(alpha)?)
        }
    };
    Ok(VariationalEstimate {
        e0: dim.half(),
        correction,
        norm: T::one() - defect,
        stderr: T::zero(),
        samples: 0,
        rejected: 0,
        seed: None,
    })
}

/// `½∫|ψ₀|²(∇f)² d²r` for the two-dimensional factor with the oscillator
/// density, which is below `π⁻¹ · π/(4α)`.
fn kinetic_integral_2d_weighted<T: Scalar>(alpha: T) -> Result<T> {
    let ln_beta = alpha.exp();
    let q = sinh_sinh(
        |v: T| {
            let t = (v / alpha).exp();
            let r = (v - ln_beta).exp();
            (T::lit(2.0) * (v / alpha - t) - r * r).exp()
        },
        &radial_options(),
    )?;
    Ok(q.value / (alpha * alpha))
}

/// Two-particle bound with the Gaussian factor of range `b`, `D > 2`.
pub fn two_particle_bound<T: Scalar>(dim: Dimension<T>, range: T) -> Result<VariationalEstimate<T>> {
    if !(dim.value() > T::lit(2.0)) {
        return Err(Error::domain("dimension", format!("the Gaussian factor bound needs D > 2, got {}", dim.value())));
    }
    two_particle_estimate(dim, CorrelationFactor::gaussian(range)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow<T> {
    pub range: T,
    pub estimate: VariationalEstimate<T>,
}

/// Bounds over a grid of ranges and the log-log slope of the excess.
pub fn two_particle_scaling<T: Scalar>(dim: Dimension<T>, ranges: &[T]) -> Result<(Vec<ScalingRow<T>>, LinearFit<T>)> {
    let rows = ranges
        .iter()
        .map(|&b| Ok(ScalingRow { range: b, estimate: two_particle_bound(dim, b)? }))
        .collect::<Result<Vec<_>>>()?;
    let ys: Vec<T> = rows.iter().map(|r| r.estimate.excess()).collect();
    let fit = log_log_fit(ranges, &ys)?;
    Ok((rows, fit))
}

/// Overlap of the normalized trial state `fψ₀` with the first excited
/// s-state of the oscillator.
pub fn excited_overlap<T: Scalar>(dim: Dimension<T>, range: T) -> Result<T> {
    let est = two_particle_bound(dim, range)?;
    let s = dim.sphere_area();
    // ⟨ψ₁|fψ₀⟩ = -⟨ψ₁|(1-f)ψ₀⟩ since ψ₁ ⊥ ψ₀
    let q = log_radial(
        |r| {
            let cut = (-(r / range).powi(2)).exp();
            if cut == T::zero() {
                return T::zero();
            }
            let p0 = radial_eigenfunction(0, dim, r).unwrap_or(T::zero());
            let p1 = radial_eigenfunction(1, dim, r).unwrap_or(T::zero());
            s * p1 * p0 * cut * r.powf(dim.value() - T::one())
        },
        range,
        &radial_options(),
    )?;
    Ok(-q.value / est.norm.sqrt())
}

/// Monte Carlo samples per independently seeded block.
pub const BLOCK_SAMPLES: u64 = 4096;
/// A sample with some `f(r_ij)` below this is rejected.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-100;
/// Highest tolerated fraction of rejected samples.
pub const MAX_REJECTION_RATE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbodyConfig {
    pub particles: usize,
    pub dim: usize,
    pub factor: CorrelationFactor<f64>,
    pub samples: u64,
    pub seed: u64,
}

impl NbodyConfig {
    pub fn new(particles: usize, dim: usize, factor: CorrelationFactor<f64>, samples: u64, seed: u64) -> Result<Self> {
        if particles < 2 {
            return Err(Error::domain("particles", format!("need N >= 2, got {particles}")));
        }
        if dim < 1 {
            return Err(Error::domain("dimension", "need D >= 1"));
        }
        if let CorrelationFactor::TwoD { .. } = factor {
            return Err(Error::domain("factor", "the product bound uses the Gaussian factor"));
        }
        if samples == 0 {
            return Err(Error::domain("samples", "need at least one sample"));
        }
        Ok(Self { particles, dim, factor, samples, seed })
    }

    pub fn blocks(&self) -> u64 {
        self.samples.div_ceil(BLOCK_SAMPLES)
    }

    fn block_len(&self, block: u64) -> u64 {
        (self.samples - block * BLOCK_SAMPLES).min(BLOCK_SAMPLES)
    }
}

/// Running sums of one or more blocks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BlockSums {
    pub accepted: u64,
    pub rejected: u64,
    pub num: f64,
    pub den: f64,
    pub num_sq: f64,
    pub den_sq: f64,
    pub num_den: f64,
}

impl BlockSums {
    pub fn merge(mut self, other: &BlockSums) -> Self {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.num += other.num;
        self.den += other.den;
        self.num_sq += other.num_sq;
        self.den_sq += other.den_sq;
        self.num_den += other.num_den;
        self
    }
}

/// `F = Π f(r_ij)` and `∇_i F` for all particles at `positions`
/// (`particles × dim`, row-major), written to `grad`. `None` if some pair
/// factor is below the underflow threshold.
pub fn trial_gradient(
    factor: &CorrelationFactor<f64>,
    particles: usize,
    dim: usize,
    positions: &[f64],
    grad: &mut [f64],
) -> Option<f64> {
    grad.iter_mut().for_each(|g| *g = 0.0);
    let mut value = 1.0;
    for i in 0..particles {
        for j in (i + 1)..particles {
            let (xi, xj) = (&positions[i * dim..(i + 1) * dim], &positions[j * dim..(j + 1) * dim]);
            let r = xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let (f, fp) = factor.eval(r).ok()?;
            if f < UNDERFLOW_THRESHOLD {
                return None;
            }
            value *= f;
            let w = fp / (f * r);
            if w == 0.0 {
                continue;
            }
            for c in 0..dim {
                let d = w * (xi[c] - xj[c]);
                grad[i * dim + c] += d;
                grad[j * dim + c] -= d;
            }
        }
    }
    grad.iter_mut().for_each(|g| *g *= value);
    Some(value)
}

/// Sums over block `index`. Each block draws from its own ChaCha8 stream,
/// so blocks can be evaluated in any order or in parallel.
pub fn nbody_block(cfg: &NbodyConfig, index: u64) -> BlockSums {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let coords = cfg.particles * cfg.dim;
    let mut pos = vec![0.0; coords];
    let mut grad = vec![0.0; coords];
    let mut sums = BlockSums::default();
    for _ in 0..cfg.block_len(index) {
        for x in pos.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x = z * std::f64::consts::FRAC_1_SQRT_2;
        }
        match trial_gradient(&cfg.factor, cfg.particles, cfg.dim, &pos, &mut grad) {
            None => sums.rejected += 1,
            Some(f) => {
                let num = 0.5 * grad.iter().map(|g| g * g).sum::<f64>();
                let den = f * f;
                sums.accepted += 1;
                sums.num += num;
                sums.den += den;
                sums.num_sq += num * num;
                sums.den_sq += den * den;
                sums.num_den += num * den;
            }
        }
    }
    sums
}

/// Turns the merged sums into an estimate; errors when too many samples
/// were rejected.
pub fn finish_estimate(cfg: &NbodyConfig, sums: &BlockSums) -> Result<VariationalEstimate<f64>> {
    let total = sums.accepted + sums.rejected;
    if sums.accepted == 0 || sums.rejected as f64 >= MAX_REJECTION_RATE * total as f64 {
        return Err(Error::Rejection { rejected: sums.rejected, samples: total });
    }
    let n = sums.accepted as f64;
    let (c, d) = (sums.num / n, sums.den / n);
    let var_num = (sums.num_sq / n - c * c).max(0.0);
    let var_den = (sums.den_sq / n - d * d).max(0.0);
    let cov = sums.num_den / n - c * d;
    // delta method for the ratio c/d
    let var_ratio = (var_num / (d * d) - 2.0 * c * cov / d.powi(3) + c * c * var_den / d.powi(4)).max(0.0);
    Ok(VariationalEstimate {
        e0: 0.5 * (cfg.particles * cfg.dim) as f64,
        correction: c,
        norm: d,
        stderr: (var_ratio / n).sqrt(),
        samples: sums.accepted,
        rejected: sums.rejected,
        seed: Some(cfg.seed),
    })
}

/// Merges block sums in block order.
pub fn merge_blocks<'a>(blocks: impl IntoIterator<Item = &'a BlockSums>) -> BlockSums {
    blocks.into_iter().fold(BlockSums::default(), |acc, b| acc.merge(b))
}

/// Product-factor bound for `N` particles in the oscillator, by direct
/// sampling of `|Ψ₀|²`. Deterministic in `(seed, samples)`.
pub fn nbody_bound_mc(cfg: &NbodyConfig) -> Result<VariationalEstimate<f64>> {
    let blocks: Vec<BlockSums> = (0..cfg.blocks()).map(|b| nbody_block(cfg, b)).collect();
    finish_estimate(cfg, &merge_blocks(&blocks))
}
