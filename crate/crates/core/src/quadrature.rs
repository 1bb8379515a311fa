//! Double-exponential quadrature.
//!
//! `tanh-sinh` maps a finite interval to the real line with
//! `x = (a+b)/2 + (b-a)/2 · tanh(π/2 · sinh t)`; `sinh-sinh` handles the whole
//! real line with `x = sinh(π/2 · sinh t)`. Both are integrated with the
//! trapezoidal rule in `t`, halving the step each level and reusing the
//! previous nodes. Node clustering at the endpoints makes the finite rule
//! insensitive to integrable endpoint singularities and to sharp features
//! near the ends.

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Deepest level; the step at level `l` is `2^{-l}`.
    pub max_level: u32,
}

impl<T: Scalar> Default for QuadOptions<T> {
    fn default() -> Self {
        Self { rel_tol: T::tol(1e-13), abs_tol: T::zero(), max_level: 12 }
    }
}

impl<T: Scalar> QuadOptions<T> {
    pub fn with_rel_tol(mut self, tol: T) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn with_abs_tol(mut self, tol: T) -> Self {
        self.abs_tol = tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    /// Difference between the last two levels (an overestimate in practice).
    pub error: T,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map<T> {
    Finite { a: T, b: T },
    Real,
}

impl<T: Scalar> Map<T> {
    fn t_max(&self) -> T {
        let half_pi = T::FRAC_PI_2();
        match self {
            // distance to the nearest endpoint ~ (b-a) e^{-2u}; stop once it
            // drops below eps² (b-a)
            Map::Finite { .. } => {
                let u_max = -T::epsilon().ln();
                (u_max / half_pi).asinh()
            }
            // |x| up to 1e8
            Map::Real => (T::lit(1.0e8).asinh() / half_pi).asinh(),
        }
    }

    /// Abscissa and weight (excluding the step `h`) at parameter `t`.
    #[inline]
    fn node(&self, t: T) -> (T, T) {
        let half_pi = T::FRAC_PI_2();
        let u = half_pi * t.sinh();
        let dudt = half_pi * t.cosh();
        match *self {
            Map::Finite { a, b } => {
                let half = (b - a) / T::lit(2.0);
                let cu = u.cosh();
                let w = half * dudt / (cu * cu);
                // distance from the endpoint nearest to the node, free of
                // the cancellation in 1 - tanh(u)
                let e = (-T::lit(2.0) * u.abs()).exp();
                let delta = (b - a) * e / (T::one() + e);
                let x = if t < T::zero() { a + delta } else { b - delta };
                (x, w)
            }
            Map::Real => (u.sinh(), dudt * u.cosh()),
        }
    }
}

fn drive<T, F>(map: Map<T>, len: usize, opts: &QuadOptions<T>, mut f: F) -> Result<(Vec<T>, T, usize)>
where
    T: Scalar,
    F: FnMut(T, &mut [T]),
{
    const MIN_LEVEL: u32 = 3;
    let t_max = map.t_max();
    let mut sums = vec![T::zero(); len];
    // largest single |w f| seen; sets the rounding floor under cancellation
    let mut mass = T::zero();
    let mut vals = vec![T::zero(); len];
    let mut prev: Option<Vec<T>> = None;
    let mut evaluations = 0usize;

    let mut visit = |t: T, sums: &mut [T], mass: &mut T, vals: &mut [T]| -> Result<()> {
        let (x, w) = map.node(t);
        if w == T::zero() {
            return Ok(());
        }
        f(x, vals);
        for (s, v) in sums.iter_mut().zip(vals.iter()) {
            if !v.is_finite() {
                return Err(Error::NoConvergence(format!("non-finite integrand at x = {x}")));
            }
            *s = *s + w * *v;
            *mass = mass.max(w * v.abs());
        }
        Ok(())
    };

    for level in 0..=opts.max_level {
        let h = T::lit(0.5f64.powi(level as i32));
        let (start, step) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
        let mut j = start;
        loop {
            let t = T::from_i64(j).expect("small node index") * h;
            if t > t_max {
                break;
            }
            if j == 0 {
                visit(t, &mut sums, &mut mass, &mut vals)?;
                evaluations += 1;
            } else {
                visit(t, &mut sums, &mut mass, &mut vals)?;
                visit(-t, &mut sums, &mut mass, &mut vals)?;
                evaluations += 2;
            }
            j += step;
        }
        let est: Vec<T> = sums.iter().map(|&s| s * h).collect();
        if let Some(p) = prev.as_ref() {
            let scale = est.iter().fold(T::zero(), |m, e| m.max(e.abs()));
            let worst = est.iter().zip(p.iter()).fold(T::zero(), |m, (e, q)| m.max((*e - *q).abs()));
            let floor = T::epsilon() * T::lit(64.0) * mass * h;
            if worst <= opts.abs_tol.max(opts.rel_tol * scale).max(floor) && level >= MIN_LEVEL {
                return Ok((est, worst, evaluations));
            }
        }
        prev = Some(est);
    }
    Err(Error::NoConvergence(format!(
        "double-exponential quadrature did not reach rel_tol {} by level {}",
        opts.rel_tol, opts.max_level
    )))
}

/// `∫_a^b f(x) dx` by tanh-sinh quadrature.
pub fn tanh_sinh<T, F>(mut f: F, a: T, b: T, opts: &QuadOptions<T>) -> Result<Quadrature<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !(a < b) {
        return Err(Error::domain("tanh_sinh", format!("empty interval [{a}, {b}]")));
    }
    let (v, error, evaluations) = drive(Map::Finite { a, b }, 1, opts, |x, out| out[0] = f(x))?;
    Ok(Quadrature { value: v[0], error, evaluations })
}

/// Componentwise `∫_a^b f(x) dx` for a vector-valued integrand.
///
/// `f(x, out)` must fill `out` (length `len`). All components share the node
/// set; the level stops once every component meets the tolerance.
pub fn tanh_sinh_many<T, F>(f: F, a: T, b: T, len: usize, opts: &QuadOptions<T>) -> Result<Vec<T>>
where
    T: Scalar,
    F: FnMut(T, &mut [T]),
{
    if !(a < b) {
        return Err(Error::domain("tanh_sinh_many", format!("empty interval [{a}, {b}]")));
    }
    drive(Map::Finite { a, b }, len, opts, f).map(|(v, _, _)| v)
}

/// `∫_{-∞}^{∞} f(x) dx` by sinh-sinh quadrature.
///
/// The integrand must be negligible for `|x| > 1e8`.
pub fn sinh_sinh<T, F>(mut f: F, opts: &QuadOptions<T>) -> Result<Quadrature<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (v, error, evaluations) = drive(Map::Real, 1, opts, |x, out| out[0] = f(x))?;
    Ok(Quadrature { value: v[0], error, evaluations })
}

/// `∫_0^∞ h(r) dr` through `r = scale·e^u`, integrated over `u ∈ ℝ`.
///
/// Suited to integrands concentrated around `r ~ scale` with power-law
/// behaviour at the origin, whatever the magnitude of `scale`.
pub fn log_radial<T, F>(mut h: F, scale: T, opts: &QuadOptions<T>) -> Result<Quadrature<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !(scale > T::zero()) {
        return Err(Error::domain("log_radial", format!("scale = {scale}")));
    }
    sinh_sinh(
        |u| {
            let r = scale * u.exp();
            if r == T::zero() || !r.is_finite() {
                T::zero()
            } else {
                h(r) * r
            }
        },
        opts,
    )
}
