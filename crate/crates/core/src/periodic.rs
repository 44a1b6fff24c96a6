//! 2π-periodic counterparts: Fourier partial sums, their conjugates, Fejér
//! means, and the radial maximum of power series in the unit disk.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{oscillation_width, Quadrature};

/// A signal on [−π, π), either by Fourier coefficients or as a callable.
#[derive(Clone)]
pub enum PeriodicSignal {
    /// f(t) = a₀/2 + Σ_{k≥1} (a_k cos kt + b_k sin kt); `b[0]` is ignored.
    Coefficients { a: Vec<f64>, b: Vec<f64> },
    Callable(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for PeriodicSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicSignal::Coefficients { a, b } => f.debug_struct("Coefficients").field("a", a).field("b", b).finish(),
            PeriodicSignal::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

impl PeriodicSignal {
    pub fn coefficients(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("Fourier coefficients must be finite".into()));
        }
        Ok(PeriodicSignal::Coefficients { a, b })
    }

    pub fn callable(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        PeriodicSignal::Callable(Arc::new(f))
    }

    /// cos(kt)
    pub fn cosine(k: usize) -> Self {
        let mut a = vec![0.0; k + 1];
        a[k] = if k == 0 { 2.0 } else { 1.0 };
        PeriodicSignal::Coefficients { a, b: vec![0.0; k + 1] }
    }

    /// sin(kt), k ≥ 1
    pub fn sine(k: usize) -> Self {
        let mut b = vec![0.0; k + 1];
        b[k] = 1.0;
        PeriodicSignal::Coefficients { a: vec![0.0; k + 1], b }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            PeriodicSignal::Coefficients { a, b } => Some(a.len().max(b.len()).saturating_sub(1)),
            PeriodicSignal::Callable(_) => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            PeriodicSignal::Coefficients { .. } => coefficient_sum(self, usize::MAX, t, false),
            PeriodicSignal::Callable(f) => f(t),
        }
    }
}

fn coef(v: &[f64], k: usize) -> f64 {
    v.get(k).copied().unwrap_or(0.0)
}

fn coefficient_sum(f: &PeriodicSignal, n: usize, t: f64, conjugate: bool) -> f64 {
    let PeriodicSignal::Coefficients { a, b } = f else { unreachable!() };
    let top = n.min(a.len().max(b.len()).saturating_sub(1));
    let mut sum = if conjugate { 0.0 } else { 0.5 * coef(a, 0) };
    for k in 1..=top {
        let (s, c) = (k as f64 * t).sin_cos();
        sum += if conjugate { coef(a, k) * s - coef(b, k) * c } else { coef(a, k) * c + coef(b, k) * s };
    }
    sum
}

/// D_N(t) = sin((N+½)t)/(2 sin(t/2)) = ½ + Σ_{k=1}^{N} cos kt.
pub fn dirichlet(n: usize, t: f64) -> f64 {
    let h = n as f64 + 0.5;
    let den = 2.0 * (0.5 * t).sin();
    if den.abs() < 1e-300 {
        return h;
    }
    (h * t).sin() / den
}

/// D̃_N(t) = (cos(t/2) − cos((N+½)t))/(2 sin(t/2)) = Σ_{k=1}^{N} sin kt.
pub fn conjugated_dirichlet(n: usize, t: f64) -> f64 {
    let den = 2.0 * (0.5 * t).sin();
    if den.abs() < 1e-300 {
        return 0.0;
    }
    // cos x − cos y = −2 sin((x+y)/2) sin((x−y)/2)
    let h = n as f64 + 0.5;
    2.0 * (0.5 * (h + 0.5) * t).sin() * (0.5 * (h - 0.5) * t).sin() / den
}

fn periodic_quadrature(degree: f64) -> Quadrature {
    Quadrature::with_tolerance(1e-13, 1e-12).max_width(oscillation_width(degree))
}

/// (1/π) ∫_{−π}^{π} f(s) D(t − s) ds
fn convolve(f: &PeriodicSignal, n: usize, t: f64, kernel: fn(usize, f64) -> f64) -> Result<f64> {
    let quad = periodic_quadrature(n as f64 + f.degree().unwrap_or(n) as f64);
    let est = quad.integrate_with_breaks(|s| f.eval(s) * kernel(n, t - s), -PI, PI, &[0.0, t - 2.0 * PI, t, t + 2.0 * PI])?;
    Ok(est.value / PI)
}

/// U_N f(t); coefficient form when available, else quadrature against D_N.
pub fn partial_fourier(f: &PeriodicSignal, n: usize, t: f64) -> Result<f64> {
    match f {
        PeriodicSignal::Coefficients { .. } => Ok(coefficient_sum(f, n, t, false)),
        PeriodicSignal::Callable(_) => partial_fourier_quadrature(f, n, t),
    }
}

/// Ũ_N f(t) = Σ_{k=1}^{N} (a_k sin kt − b_k cos kt); quadrature against D̃_N for callables.
pub fn conj_partial_fourier(f: &PeriodicSignal, n: usize, t: f64) -> Result<f64> {
    match f {
        PeriodicSignal::Coefficients { .. } => Ok(coefficient_sum(f, n, t, true)),
        PeriodicSignal::Callable(_) => conj_partial_fourier_quadrature(f, n, t),
    }
}

pub fn partial_fourier_quadrature(f: &PeriodicSignal, n: usize, t: f64) -> Result<f64> {
    convolve(f, n, t, dirichlet)
}

pub fn conj_partial_fourier_quadrature(f: &PeriodicSignal, n: usize, t: f64) -> Result<f64> {
    convolve(f, n, t, conjugated_dirichlet)
}

/// (1/M) Σ_{N=0}^{M−1} U_N f(t), by averaging the partial sums.
pub fn fejer_mean_periodic(f: &PeriodicSignal, m: usize, t: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let mut total = 0.0;
    for n in 0..m {
        total += partial_fourier(f, n, t)?;
    }
    Ok(total / m as f64)
}

/// a₀/2 + Σ_{k<M} (1 − k/M)(a_k cos kt + b_k sin kt)
pub fn fejer_weighted(f: &PeriodicSignal, m: usize, t: f64) -> Result<f64> {
    let PeriodicSignal::Coefficients { a, b } = f else {
        return Err(Error::Unsupported("Fejér weights need Fourier coefficients".into()));
    };
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let mut sum = 0.5 * coef(a, 0);
    for k in 1..m {
        let (s, c) = (k as f64 * t).sin_cos();
        sum += (1.0 - k as f64 / m as f64) * (coef(a, k) * c + coef(b, k) * s);
    }
    Ok(sum)
}

/// f(z) = Σ_{n=1}^{D} c_n zⁿ
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeriesFn {
    coefficients: Vec<f64>,
}

impl PowerSeriesFn {
    /// `coefficients[0]` is c₁.
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("power series coefficients must be finite".into()));
        }
        Ok(PowerSeriesFn { coefficients })
    }

    /// c_n = C₃(ε)·n^{−(1/2+ε)} for n ≤ `terms`; unit H² norm.
    pub fn extremal(epsilon: f64, terms: usize) -> Result<Self> {
        let c3 = c3(epsilon, terms)?;
        Self::new((1..=terms).map(|n| c3 * (n as f64).powf(-(0.5 + epsilon))).collect())
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn h2_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn eval(&self, r: f64, omega: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &c) in self.coefficients.iter().enumerate() {
            let n = j + 1;
            let term = c * r.powi(n as i32);
            let (s, co) = (n as f64 * omega).sin_cos();
            re += term * co;
            im += term * s;
        }
        Complex64::new(re, im)
    }
}

/// C₃(ε) = (Σ_{n≤terms} n^{−(1+2ε)})^{−1/2}
pub fn c3(epsilon: f64, terms: usize) -> Result<f64> {
    if !(epsilon > 0.0) || terms == 0 {
        return Err(Error::InvalidArgument(format!("need ε > 0 and at least one term, got ε = {epsilon}, terms = {terms}")));
    }
    Ok((1..=terms).map(|n| (n as f64).powf(-(1.0 + 2.0 * epsilon))).sum::<f64>().powf(-0.5))
}

pub const RADIAL_GRID: usize = 4096;

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius must lie in (0, 1), got {r}")))
    }
}

/// max |f(re^{iω})| over ω_j = −π + 2πj/`points`, with the maximizing ω.
pub fn radial_max_on_grid(f: &PowerSeriesFn, r: f64, points: usize) -> Result<(f64, f64)> {
    check_radius(r)?;
    let step = 2.0 * PI / points as f64;
    Ok((0..points)
        .map(|j| {
            let w = -PI + step * j as f64;
            (f.eval(r, w).norm(), w)
        })
        .fold((f64::NEG_INFINITY, 0.0), |best, cur| if cur.0 > best.0 { cur } else { best }))
}

/// M_r(f) = max_ω |f(re^{iω})|: 4096-point grid, then golden-section refinement
/// around the best grid point. Returns (value, ω).
pub fn hardy_radial_max(f: &PowerSeriesFn, r: f64) -> Result<(f64, f64)> {
    let (v0, w0) = radial_max_on_grid(f, r, RADIAL_GRID)?;
    let step = 2.0 * PI / RADIAL_GRID as f64;
    let g = |w: f64| f.eval(r, w).norm();
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (w0 - step, w0 + step);
    let (mut x1, mut x2) = (hi - ratio * (hi - lo), lo + ratio * (hi - lo));
    let (mut f1, mut f2) = (g(x1), g(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        }
    }
    let (v1, w1) = if f1 >= f2 { (f1, x1) } else { (f2, x2) };
    Ok(if v1 > v0 { (v1, w1) } else { (v0, w0) })
}

/// C₃(ε)·Σ_{n≤terms} n^{−(1/2+ε)} rⁿ, summed term by term exactly as the
/// extremal series is evaluated at ω = 0.
pub fn hardy_lower_bound(epsilon: f64, terms: usize, r: f64) -> Result<f64> {
    check_radius(r)?;
    let f = PowerSeriesFn::extremal(epsilon, terms)?;
    Ok(f.coefficients().iter().enumerate().fold(0.0, |acc, (j, &c)| acc + c * r.powi(j as i32 + 1) * 1.0))
}
