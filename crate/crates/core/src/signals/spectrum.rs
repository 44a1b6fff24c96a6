//! Spectra on a symmetric band and the inverse Fourier transform by quadrature.
//!
//! Convention: f(t) = (1/2π) ∫ f̂(ω) e^{iωt} dω.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{oscillation_width, Quadrature};

pub trait Spectrum: Send + Sync {
    fn eval(&self, omega: f64) -> Complex64;

    /// The spectrum vanishes outside [−band, band].
    fn band(&self) -> f64;

    /// Points where the spectrum is not smooth.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Time extent of the underlying signal; the spectrum oscillates at this rate in ω.
    fn rate(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Piecewise-linear function through sorted breakpoints, zero outside them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumSpec", into = "SpectrumSpec")]
pub struct SpectrumFn {
    points: Vec<(f64, f64)>,
    parity: Parity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumSpec {
    parity: Parity,
    breakpoints: Vec<[f64; 2]>,
}

impl TryFrom<SpectrumSpec> for SpectrumFn {
    type Error = Error;

    fn try_from(spec: SpectrumSpec) -> Result<Self> {
        SpectrumFn::new(spec.breakpoints.into_iter().map(|[w, v]| (w, v)).collect(), spec.parity)
    }
}

impl From<SpectrumFn> for SpectrumSpec {
    fn from(s: SpectrumFn) -> Self {
        SpectrumSpec { parity: s.parity, breakpoints: s.points.into_iter().map(|(w, v)| [w, v]).collect() }
    }
}

impl SpectrumFn {
    pub fn new(points: Vec<(f64, f64)>, parity: Parity) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSpectrum("at least two breakpoints are required".into()));
        }
        if points.iter().any(|(w, v)| !w.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidSpectrum("breakpoints must be finite".into()));
        }
        if points.windows(2).any(|p| p[1].0 <= p[0].0) {
            return Err(Error::InvalidSpectrum("breakpoints must be strictly increasing in ω".into()));
        }
        let s = SpectrumFn { points, parity };
        let sign = parity.sign();
        for &(w, v) in &s.points {
            let mirrored = s.value(-w);
            if (mirrored - sign * v).abs() > 1e-12 * v.abs().max(1.0) {
                return Err(Error::InvalidSpectrum(format!(
                    "{parity:?} parity fails at ω = {w}: value {v}, mirror {mirrored}"
                )));
            }
        }
        Ok(s)
    }

    /// Builds the full function from its breakpoints on ω ≥ 0.
    pub fn from_half(half: &[(f64, f64)], parity: Parity) -> Result<Self> {
        let sign = parity.sign();
        let mut points: Vec<(f64, f64)> =
            half.iter().rev().filter(|(w, _)| *w > 0.0).map(|&(w, v)| (-w, sign * v)).collect();
        points.extend_from_slice(half);
        Self::new(points, parity)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn value(&self, omega: f64) -> f64 {
        let (lo, hi) = (self.points[0].0, self.points[self.points.len() - 1].0);
        if !(lo..=hi).contains(&omega) {
            return 0.0;
        }
        let j = self.points.partition_point(|&(w, _)| w <= omega);
        if j == self.points.len() {
            return self.points[j - 1].1;
        }
        let (w0, v0) = self.points[j - 1];
        let (w1, v1) = self.points[j];
        v0 + (v1 - v0) * (omega - w0) / (w1 - w0)
    }

    /// Support [−aπ, aπ] carrying the value `height` on [−band, band].
    pub fn rect(band: f64, height: f64) -> Result<Self> {
        Self::from_half(&[(0.0, height), (band, height)], Parity::Even)
    }

    /// q̂₁: 1 on [0, π/2], falling linearly to 0 at π.
    pub fn q1() -> Self {
        Self::from_half(&[(0.0, 1.0), (PI / 2.0, 1.0), (PI, 0.0)], Parity::Even).expect("valid")
    }

    /// q̂₂: rising on [π/2, π], 1 on [π, aπ], falling to 0 at aπ + π/2.
    pub fn q2(a: f64) -> Result<Self> {
        check_factor(a)?;
        Self::from_half(
            &[(0.0, 0.0), (PI / 2.0, 0.0), (PI, 1.0), (a * PI, 1.0), (a * PI + PI / 2.0, 0.0)],
            Parity::Even,
        )
    }

    /// φ̂ of the trapezoid kernel: 1/a on [0, π], falling linearly to 0 at aπ.
    pub fn trapezoid(a: f64) -> Result<Self> {
        check_factor(a)?;
        Self::from_half(&[(0.0, 1.0 / a), (PI, 1.0 / a), (a * PI, 0.0)], Parity::Even)
    }

    /// ĝ_M(ω) = M·(1 − M|ω|/(2π))₊.
    pub fn triangle(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("M must be at least 1".into()));
        }
        let m = m as f64;
        Self::from_half(&[(0.0, m), (2.0 * PI / m, 0.0)], Parity::Even)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpectrum(e.to_string()))
    }
}

fn check_factor(a: f64) -> Result<()> {
    if a.is_finite() && a > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("oversampling factor must exceed 1, got {a}")))
    }
}

impl Spectrum for SpectrumFn {
    fn eval(&self, omega: f64) -> Complex64 {
        Complex64::new(self.value(omega), 0.0)
    }

    fn band(&self) -> f64 {
        self.points[0].0.abs().max(self.points[self.points.len() - 1].0.abs())
    }

    fn kinks(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }
}

/// (1/2π)∫_{−band}^{band} g(ω) e^{iωt} dω, with real and imaginary parts integrated separately.
pub fn inverse_fourier<G>(g: G, band: f64, kinks: &[f64], rate: f64, t: f64, tol: f64) -> Result<Complex64>
where
    G: Fn(f64) -> Complex64,
{
    let quad = Quadrature::with_tolerance(tol, tol).max_width(oscillation_width(rate + t.abs()));
    let mut breaks = kinks.to_vec();
    breaks.push(0.0);
    let re = quad.integrate_with_breaks(
        |w| {
            let (s, c) = (w * t).sin_cos();
            let v = g(w);
            v.re * c - v.im * s
        },
        -band,
        band,
        &breaks,
    )?;
    let im = quad.integrate_with_breaks(
        |w| {
            let (s, c) = (w * t).sin_cos();
            let v = g(w);
            v.re * s + v.im * c
        },
        -band,
        band,
        &breaks,
    )?;
    Ok(Complex64::new(re.value, im.value) / (2.0 * PI))
}

/// (1/2π)∫|f̂|.
pub fn pw1_norm(spectrum: &dyn Spectrum) -> Result<f64> {
    let band = spectrum.band();
    let quad = Quadrature::with_tolerance(1e-12, 1e-10).max_width(oscillation_width(spectrum.rate()));
    let mut breaks = spectrum.kinks();
    breaks.push(0.0);
    let est = quad.integrate_with_breaks(|w| spectrum.eval(w).norm(), -band, band, &breaks)?;
    Ok(est.value / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_and_support() {
        let s = SpectrumFn::trapezoid(2.0).unwrap();
        assert_eq!(s.value(0.3), 0.5);
        assert_eq!(s.value(-PI), 0.5);
        assert!((s.value(1.5 * PI) - 0.25).abs() < 1e-15);
        assert_eq!(s.value(2.0 * PI + 1e-9), 0.0);
        assert_eq!(s.band(), 2.0 * PI);
    }

    #[test]
    fn parity_is_checked() {
        let bad = SpectrumFn::new(vec![(-1.0, 1.0), (1.0, 2.0)], Parity::Even);
        assert!(matches!(bad, Err(Error::InvalidSpectrum(_))));
        let odd = SpectrumFn::from_half(&[(0.0, 0.0), (1.0, 2.0)], Parity::Odd).unwrap();
        assert_eq!(odd.value(-0.5), -1.0);
        assert!(SpectrumFn::new(vec![(0.0, 1.0), (0.0, 2.0)], Parity::Even).is_err());
    }

    #[test]
    fn q_decomposition_partition() {
        for a in [1.5, 2.0, 4.0] {
            let (q1, q2) = (SpectrumFn::q1(), SpectrumFn::q2(a).unwrap());
            for i in 0..1000 {
                let w = PI / 2.0 + (a * PI - PI / 2.0) * i as f64 / 999.0;
                assert!((q1.value(w) + q2.value(w) - 1.0).abs() < 1e-14, "a={a} ω={w}");
                let low = PI / 2.0 * i as f64 / 999.0;
                assert_eq!(q1.value(low), 1.0);
            }
        }
    }

    #[test]
    fn trapezoid_is_in_kernel_family() {
        for a in [1.5, 2.0, 4.0] {
            let s = SpectrumFn::trapezoid(a).unwrap();
            for i in 0..=200 {
                let w = -PI + 2.0 * PI * i as f64 / 200.0;
                assert_eq!(s.value(w), 1.0 / a);
            }
            assert!(s.band() <= a * PI);
        }
    }

    #[test]
    fn triangle_norm_is_one() {
        for m in [2, 3, 7] {
            let s = SpectrumFn::triangle(m).unwrap();
            assert!((pw1_norm(&s).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn json_import() {
        let s = SpectrumFn::from_json(r#"{"parity":"odd","breakpoints":[[-1,-1],[0,0],[1,1]]}"#).unwrap();
        assert_eq!(s.value(0.25), 0.25);
        assert!(SpectrumFn::from_json(r#"{"parity":"even","breakpoints":[[-1,0],[1,1]]}"#).is_err());
    }

    #[test]
    fn inverse_of_rect_is_sinc() {
        let r = SpectrumFn::rect(PI, 1.0).unwrap();
        for t in [0.0, 0.5, 3.25, -11.0] {
            let v = inverse_fourier(|w| r.eval(w), PI, &r.kinks(), 0.0, t, 1e-13).unwrap();
            assert!((v.re - crate::num::sinc(t)).abs() < 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }
}
