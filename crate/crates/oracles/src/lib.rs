//! Reference solvers for the test suites.
//!
//! Everything here is deliberately independent of `delta-ineff-core`: plain
//! `f64` ODE shooting on uniform grids with Richardson extrapolation, and
//! exact rational arithmetic. Slow and simple by design of a test oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fourth-order Runge–Kutta for `y'' = q(x) y` over `[x0, x1]` in `steps`
/// equal steps, starting from `(y, y')`.
fn rk4_linear(q: &dyn Fn(f64) -> f64, x0: f64, x1: f64, steps: usize, mut y: f64, mut dy: f64) -> (f64, f64) {
    let h = (x1 - x0) / steps as f64;
    let mut x = x0;
    for _ in 0..steps {
        let k1y = dy;
        let k1d = q(x) * y;
        let k2y = dy + 0.5 * h * k1d;
        let k2d = q(x + 0.5 * h) * (y + 0.5 * h * k1y);
        let k3y = dy + 0.5 * h * k2d;
        let k3d = q(x + 0.5 * h) * (y + 0.5 * h * k2y);
        let k4y = dy + h * k3d;
        let k4d = q(x + h) * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        x += h;
        // keep the growing solution representable
        let m = y.abs().max(dy.abs());
        if m > 1e100 {
            y /= m;
            dy /= m;
        }
    }
    (y, dy)
}

fn bisect_sign_change(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let f_lo = f(lo);
    let f_hi = f(hi);
    assert!(f_lo * f_hi < 0.0, "oracle bracket [{lo}, {hi}] does not change sign: {f_lo}, {f_hi}");
    let s_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Even-parity eigenvalue of `-½ψ'' + V(x)ψ = Eψ` on the line with a contact
/// term `g δ(x)`, via shooting on `[0, x_max]` with `ψ(0) = 1`,
/// `ψ'(0⁺) = g` (the contact term's jump condition for an even function).
///
/// `(e_lo, e_hi)` must bracket exactly one even level. Two grids (`steps` and
/// `2·steps`) are combined by fourth-order Richardson extrapolation.
pub fn even_level_1d(
    potential: &dyn Fn(f64) -> f64,
    contact: f64,
    e_lo: f64,
    e_hi: f64,
    x_max: f64,
    steps: usize,
) -> f64 {
    let solve = |n: usize| {
        bisect_sign_change(e_lo, e_hi, |e| {
            let q = |x: f64| 2.0 * (potential(x) - e);
            rk4_linear(&q, 0.0, x_max, n, 1.0, contact).0
        })
    };
    let coarse = solve(steps);
    let fine = solve(2 * steps);
    (16.0 * fine - coarse) / 15.0
}

/// Ground level of `-½ψ'' + ½x²ψ + g δ(x) ψ = Eψ`.
pub fn oscillator_contact_ground_1d(g: f64) -> f64 {
    let hi = if g >= 0.0 { 1.5 } else { 0.5 };
    let lo = if g >= 0.0 { 0.5 } else { -20.0 };
    even_level_1d(&|x| 0.5 * x * x, g, lo, hi, 8.0, 8000)
}

/// Ground level of `-½ψ'' + [½x² + g e^{-x²/ε²}/(√π ε)]ψ = Eψ`.
pub fn oscillator_gaussian_ground_1d(g: f64, eps: f64) -> f64 {
    let amp = g / (std::f64::consts::PI.sqrt() * eps);
    let steps = ((8.0 / eps) * 200.0) as usize;
    even_level_1d(&move |x| 0.5 * x * x + amp * (-(x / eps) * (x / eps)).exp(), 0.0, 0.5, 1.5, 8.0, steps)
}

/// Ground energy `k²` of `-u'' + V u = E u` on `[0, R]`, `u(0) = u(R) = 0`,
/// with `V = v0` for `r < eps` and zero beyond: the s-wave of a spherical
/// well containing a constant barrier. The grid has a node exactly at `eps`.
pub fn well_barrier_ground(radius: f64, eps: f64, v0: f64, e_lo: f64, e_hi: f64) -> f64 {
    let solve = |n_in: usize, n_out: usize| {
        bisect_sign_change(e_lo, e_hi, |e| {
            let inner = |_r: f64| v0 - e;
            let (u, du) = rk4_linear(&inner, 0.0, eps, n_in, 0.0, 1.0);
            let outer = |_r: f64| -e;
            rk4_linear(&outer, eps, radius, n_out, u, du).0
        })
    };
    let lambda = (v0 - e_lo).abs().sqrt();
    let n_in = ((lambda * eps * 400.0) as usize).max(400);
    let n_out = 4000;
    let coarse = solve(n_in, n_out);
    let fine = solve(2 * n_in, 2 * n_out);
    (16.0 * fine - coarse) / 15.0
}

/// `Σ_{k=0}^{K} 1/(Δ - 2k)` in exact rational arithmetic for
/// `Δ = num/den`, rounded to `f64` at the end.
pub fn exact_reciprocal_sum(truncation: u64, num: i64, den: i64) -> f64 {
    let delta = BigRational::new(BigInt::from(num), BigInt::from(den));
    let mut acc = BigRational::zero();
    for k in 0..=truncation {
        let d = &delta - BigRational::from_integer(BigInt::from(2 * k));
        acc += BigRational::one() / d;
    }
    rational_to_f64(&acc)
}

fn rational_to_f64(x: &BigRational) -> f64 {
    // scale so the integer quotient carries ~120 significant bits
    let shift: i64 = 120 - (x.numer().bits() as i64 - x.denom().bits() as i64);
    let (n, d) = if shift >= 0 {
        (x.numer() << (shift as usize), x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() << ((-shift) as usize))
    };
    let q: BigInt = n / d;
    let mag = q.abs().to_f64().expect("finite");
    let v = mag * 2f64.powi(-(shift as i32));
    if q.is_negative() {
        -v
    } else {
        v
    }
}
