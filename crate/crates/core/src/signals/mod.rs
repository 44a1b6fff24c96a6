//! Sample sequences on the grid k/a and the adversarial constructions built from a [`BreakPlan`].

pub mod kernels;
pub mod spectrum;

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::sinc;
use crate::quadrature::{oscillation_width, Quadrature};
use crate::schedule::BreakPlan;

pub use kernels::{Kernel, KernelSpectrum};
pub use spectrum::{inverse_fourier, pw1_norm, Parity, Spectrum, SpectrumFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    NyquistF1,
    ModulatedF2,
    OversamplingF1,
    FilteredFSigma,
    Custom,
}

/// Samples f(k/a) for |k| ≤ L; zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalData")]
pub struct SampledSignal {
    a: f64,
    half_width: usize,
    values: Vec<f64>,
    provenance: Provenance,
}

#[derive(Deserialize)]
struct SignalData {
    a: f64,
    half_width: usize,
    values: Vec<f64>,
    provenance: Provenance,
}

impl TryFrom<SignalData> for SampledSignal {
    type Error = Error;

    fn try_from(d: SignalData) -> Result<Self> {
        if d.values.len() != 2 * d.half_width + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} values do not fill the support [−{L}, {L}]",
                d.values.len(),
                L = d.half_width
            )));
        }
        let mut s = SampledSignal::custom(d.a, d.values)?;
        s.provenance = d.provenance;
        Ok(s)
    }
}

impl SampledSignal {
    /// `values` lists f(−L/a), …, f(L/a) and must have odd length.
    pub fn custom(a: f64, values: Vec<f64>) -> Result<Self> {
        if !(a.is_finite() && a >= 1.0) {
            return Err(Error::InvalidArgument(format!("oversampling factor must be at least 1, got {a}")));
        }
        if values.len() % 2 == 0 {
            return Err(Error::InvalidArgument("a symmetric support needs an odd number of samples".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("sample values must be finite".into()));
        }
        Ok(SampledSignal { a, half_width: values.len() / 2, values, provenance: Provenance::Custom })
    }

    pub fn unit_impulse() -> Self {
        SampledSignal { a: 1.0, half_width: 0, values: vec![1.0], provenance: Provenance::Custom }
    }

    /// Samples of a function at k/a for |k| ≤ L.
    pub fn from_fn(a: f64, half_width: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let l = half_width as i64;
        Self::custom(a, (-l..=l).map(|k| f(k as f64 / a)).collect())
    }

    fn symmetric(a: f64, half_width: usize, right: Vec<f64>, provenance: Provenance) -> Self {
        let mut values: Vec<f64> = right[1..].iter().rev().copied().collect();
        values.extend(right);
        SampledSignal { a, half_width, values, provenance }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn sample(&self, k: i64) -> f64 {
        let l = self.half_width as i64;
        if k.abs() > l {
            0.0
        } else {
            self.values[(k + l) as usize]
        }
    }

    pub fn time(&self, k: i64) -> f64 {
        k as f64 / self.a
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// Spectrum of the bandlimited interpolant Σ f(k/a) sinc(at − k):
    /// (1/a) Σ f(k/a) e^{−ikω/a} on |ω| ≤ aπ.
    pub fn spectrum(&self) -> SampleSpectrum<'_> {
        SampleSpectrum { signal: self }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e))?;
        w.write_record(["k", "t", "value"]).map_err(|e| Error::io(path, e))?;
        let l = self.half_width as i64;
        for k in -l..=l {
            w.write_record([k.to_string(), self.time(k).to_string(), self.sample(k).to_string()])
                .map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::io(path, e))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

pub struct SampleSpectrum<'s> {
    signal: &'s SampledSignal,
}

impl Spectrum for SampleSpectrum<'_> {
    fn eval(&self, omega: f64) -> Complex64 {
        let s = self.signal;
        if omega.abs() > s.a * PI {
            return Complex64::new(0.0, 0.0);
        }
        let l = s.half_width as i64;
        let sum: Complex64 = (-l..=l)
            .map(|k| {
                let (sin, cos) = (k as f64 * omega / s.a).sin_cos();
                s.sample(k) * Complex64::new(cos, -sin)
            })
            .sum();
        sum / s.a
    }

    fn band(&self) -> f64 {
        self.signal.a * PI
    }

    fn rate(&self) -> f64 {
        self.signal.half_width as f64 / self.signal.a
    }
}

/// w_N(k): 1 on |k| ≤ N, linear down to 0 at |k| = 2N.
pub fn trapezoid_window(n: usize, k: i64) -> f64 {
    let (n, k) = (n as f64, k.unsigned_abs() as f64);
    if k <= n {
        1.0
    } else if k < 2.0 * n {
        1.0 - (k - n) / n
    } else {
        0.0
    }
}

/// Fejér kernel K^F_M(ω) = (1/M)·sin²(Mω/2)/sin²(ω/2).
pub fn fejer_kernel(m: usize, omega: f64) -> f64 {
    let mf = m as f64;
    let den = (0.5 * omega).sin();
    if den == 0.0 {
        return mf;
    }
    let q = (0.5 * mf * omega).sin() / den;
    q * q / mf
}

/// ŵ_N = 2K^F_{2N} − K^F_N.
pub fn w_spectrum(n: usize, omega: f64) -> f64 {
    2.0 * fejer_kernel(2 * n, omega) - fejer_kernel(n, omega)
}

/// g_M(t) = (sin(πt/M)/(πt/M))².
pub fn fejer_square(m: usize, t: f64) -> f64 {
    let s = sinc(t / m as f64);
    s * s
}

/// Smallest M with g_M(n) ≥ 1/2.
pub fn choose_m(n: usize) -> usize {
    choose_m_from(n, 1)
}

fn choose_m_from(n: usize, start: usize) -> usize {
    (start.max(1)..).find(|&m| fejer_square(m, n as f64) >= 0.5).expect("g_M(n) → 1 as M grows")
}

/// M_k for each break N_{k+1}, k = 1..K.
pub fn choose_m_sequence(plan: &BreakPlan) -> Vec<usize> {
    let mut out = Vec::with_capacity(plan.depth());
    let mut m = 1;
    for &n in &plan.breaks()[1..] {
        m = choose_m_from(n, m);
        out.push(m);
    }
    out
}

/// f₁(l) = Σ_k δ_k w_{N_{k+1}}(l) on |l| < 2N_{K+1}.
///
/// Terms are added in increasing k for every l, so rounding preserves the
/// monotone decay of the exact samples.
pub fn adversarial_nyquist(plan: &BreakPlan) -> SampledSignal {
    let half_width = 2 * plan.last_break() - 1;
    let pairs: Vec<(f64, usize)> = plan.weights().iter().copied().zip(plan.breaks()[1..].iter().copied()).collect();
    let right: Vec<f64> = (0..=half_width as i64)
        .into_par_iter()
        .map(|l| pairs.iter().fold(0.0, |acc, &(d, n)| acc + d * trapezoid_window(n, l)))
        .collect();
    SampledSignal::symmetric(1.0, half_width, right, Provenance::NyquistF1)
}

/// f₂(k) = (−1)^k f(k).
pub fn modulate(f: &SampledSignal) -> Result<SampledSignal> {
    if f.a != 1.0 {
        return Err(Error::Unsupported(format!("modulation needs Nyquist-rate samples, got a = {}", f.a)));
    }
    let l = f.half_width as i64;
    let values = (-l..=l).map(|k| if k % 2 == 0 { f.sample(k) } else { -f.sample(k) }).collect();
    Ok(SampledSignal { a: 1.0, half_width: f.half_width, values, provenance: Provenance::ModulatedF2 })
}

/// Smallest admissible support for the oversampled construction.
pub fn oversampling_support(plan: &BreakPlan, a: f64) -> usize {
    (a * (plan.last_break() + 1) as f64).ceil() as usize
}

/// f₁(l/a) = Σ_k δ_k g_{M_k}(l/a) for |l| ≤ L.
pub fn adversarial_oversampling(plan: &BreakPlan, a: f64, half_width: usize) -> Result<SampledSignal> {
    if !(a.is_finite() && a > 1.0) {
        return Err(Error::InvalidArgument(format!("oversampling factor must exceed 1, got {a}")));
    }
    let needed = oversampling_support(plan, a);
    if half_width < needed {
        return Err(Error::InvalidArgument(format!("support {half_width} is below a·(N_(K+1)+1) = {needed}")));
    }
    let pairs: Vec<(f64, usize)> = plan.weights().iter().copied().zip(choose_m_sequence(plan)).collect();
    let right: Vec<f64> = (0..=half_width as i64)
        .into_par_iter()
        .map(|l| {
            let t = l as f64 / a;
            pairs.iter().fold(0.0, |acc, &(d, m)| acc + d * fejer_square(m, t))
        })
        .collect();
    Ok(SampledSignal::symmetric(a, half_width, right, Provenance::OversamplingF1))
}

/// f̂₁ = Σ_k δ_k ŵ_{N_{k+1}} on [−π, π].
#[derive(Debug, Clone)]
pub struct NyquistSpectrum {
    pairs: Vec<(f64, usize)>,
}

impl NyquistSpectrum {
    pub fn new(plan: &BreakPlan) -> Self {
        NyquistSpectrum { pairs: plan.weights().iter().copied().zip(plan.breaks()[1..].iter().copied()).collect() }
    }

    pub fn value(&self, omega: f64) -> f64 {
        if omega.abs() > PI {
            return 0.0;
        }
        self.pairs.iter().map(|&(d, n)| d * w_spectrum(n, omega)).sum()
    }
}

impl Spectrum for NyquistSpectrum {
    fn eval(&self, omega: f64) -> Complex64 {
        Complex64::new(self.value(omega), 0.0)
    }

    fn band(&self) -> f64 {
        PI
    }

    fn rate(&self) -> f64 {
        2.0 * self.pairs.last().map_or(0, |p| p.1) as f64
    }
}

/// f₁ restricted to |ω| < σ, evaluated on the integers, with the size of the discarded part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSample {
    pub value: f64,
    /// ((1/2π)∫_{σ≤|ω|≤π} |f̂₁|²)^{1/2}
    pub tail_l2: f64,
    /// (1/2π)∫_{σ≤|ω|≤π} |f̂₁|, which bounds |f₁(l) − f_σ(l)|.
    pub tail_l1: f64,
}

pub struct BandSplit {
    spectrum: NyquistSpectrum,
    sigma: f64,
    tail_l2: f64,
    tail_l1: f64,
    rate: f64,
}

const SPLIT_TOL: f64 = 1e-12;

impl BandSplit {
    pub fn new(plan: &BreakPlan, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= PI) {
            return Err(Error::InvalidArgument(format!("σ must lie in (0, π], got {sigma}")));
        }
        let spectrum = NyquistSpectrum::new(plan);
        let rate = spectrum.rate();
        let quad = Quadrature::with_tolerance(SPLIT_TOL, 1e-10).max_width(oscillation_width(rate));
        let sq = quad.integrate(|w| spectrum.value(w).powi(2), sigma, PI)?.value;
        let abs = quad.integrate(|w| spectrum.value(w).abs(), sigma, PI)?.value;
        Ok(BandSplit { spectrum, sigma, tail_l2: (sq / PI).max(0.0).sqrt(), tail_l1: abs / PI, rate })
    }

    /// f_σ(l) = (1/π)∫₀^σ f̂₁(ω) cos(ωl) dω.
    pub fn at(&self, l: i64) -> Result<SplitSample> {
        let t = l as f64;
        let quad = Quadrature::with_tolerance(SPLIT_TOL, 1e-10).max_width(oscillation_width(self.rate + t.abs()));
        let v = quad.integrate(|w| self.spectrum.value(w) * (w * t).cos(), 0.0, self.sigma)?.value;
        Ok(SplitSample { value: v / PI, tail_l2: self.tail_l2, tail_l1: self.tail_l1 })
    }

    /// Samples f_σ(l) for |l| ≤ L as a signal.
    pub fn signal(&self, half_width: usize) -> Result<SampledSignal> {
        let right: Vec<f64> = (0..=half_width as i64)
            .into_par_iter()
            .map(|l| self.at(l).map(|s| s.value))
            .collect::<Result<_>>()?;
        Ok(SampledSignal::symmetric(1.0, half_width, right, Provenance::FilteredFSigma))
    }
}

pub fn bandlimit_split(plan: &BreakPlan, sigma: f64, l: i64) -> Result<SplitSample> {
    BandSplit::new(plan, sigma)?.at(l)
}
