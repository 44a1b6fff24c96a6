//! Reconstruction kernels on the real line.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::num::{cos_pi, sin_pi, sinc, xms_pi};
use crate::quadrature::{oscillation_width, Quadrature};
use crate::systems::LtiSystem;

use super::spectrum::SpectrumFn;

// Below this |t| the closed forms with t² in the denominator are replaced by
// their leading Taylor term.
const TINY: f64 = 1e-60;

#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// sin(πt)/(πt)
    Sinc,
    /// (1 − cos πt)/(πt), the Hilbert transform of sinc.
    Conjugated,
    /// r(t) = (2/(π²t²))(sin πt − sin(πt/2)); singular at 0.
    Remainder,
    /// φ(t) = (cos πt − cos aπt)/(a(a−1)π²t²)
    TrapezoidPhi { a: f64 },
    /// Hφ(t) = 1/(aπt) − (sin aπt − sin πt)/(a(a−1)π²t²)
    HilbertTrapezoid { a: f64 },
    /// Hq₁(t) = 1/(πt) − r(t)
    Hq1,
    /// 1/(πt); singular at 0.
    Cauchy,
    /// Impulse response of a stable system.
    Impulse(LtiSystem),
}

/// A kernel given as an inverse transform: of `shape`, or of −i·sgn(ω)·shape when `hilbert`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpectrum {
    pub shape: SpectrumFn,
    pub hilbert: bool,
}

impl KernelSpectrum {
    /// (1/π)∫₀^B shape(ω)·cos(ωt) dω, or with sin(ωt) for the Hilbert form.
    pub fn inverse(&self, t: f64, tol: f64) -> Result<f64> {
        let band = self
            .shape
            .points()
            .last()
            .map(|p| p.0)
            .unwrap_or(0.0);
        let breaks: Vec<f64> = self.shape.points().iter().map(|p| p.0).filter(|&w| w > 0.0).collect();
        let quad = Quadrature::with_tolerance(tol, tol).max_width(oscillation_width(t));
        let est = if self.hilbert {
            quad.integrate_with_breaks(|w| self.shape.value(w) * (w * t).sin(), 0.0, band, &breaks)?
        } else {
            quad.integrate_with_breaks(|w| self.shape.value(w) * (w * t).cos(), 0.0, band, &breaks)?
        };
        Ok(est.value / PI)
    }
}

fn check_factor(a: f64) -> Result<()> {
    if a.is_finite() && a > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("oversampling factor must exceed 1, got {a}")))
    }
}

impl Kernel {
    pub fn trapezoid_phi(a: f64) -> Result<Self> {
        check_factor(a)?;
        Ok(Kernel::TrapezoidPhi { a })
    }

    pub fn hilbert_trapezoid(a: f64) -> Result<Self> {
        check_factor(a)?;
        Ok(Kernel::HilbertTrapezoid { a })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Sinc => "sinc",
            Kernel::Conjugated => "conjugated",
            Kernel::Remainder => "remainder_r",
            Kernel::TrapezoidPhi { .. } => "trapezoid_phi",
            Kernel::HilbertTrapezoid { .. } => "hilbert_trapezoid",
            Kernel::Hq1 => "hq1",
            Kernel::Cauchy => "cauchy",
            Kernel::Impulse(_) => "impulse_response",
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(match *self {
            Kernel::Sinc => sinc(t),
            Kernel::Conjugated => conjugated(t),
            Kernel::Remainder => {
                if t == 0.0 {
                    return Err(Error::Singularity { kernel: self.name(), t });
                }
                remainder(t)
            }
            Kernel::TrapezoidPhi { a } => (a + 1.0) / (2.0 * a) * sinc(0.5 * (a + 1.0) * t) * sinc(0.5 * (a - 1.0) * t),
            Kernel::HilbertTrapezoid { a } => {
                if t.abs() < TINY {
                    PI * t * (a * a + a + 1.0) / (6.0 * a)
                } else {
                    (xms_pi(a * t) - xms_pi(t)) / (a * (a - 1.0) * PI * PI * t * t)
                }
            }
            Kernel::Hq1 => hq1(t),
            Kernel::Cauchy => {
                if t == 0.0 {
                    return Err(Error::Singularity { kernel: self.name(), t });
                }
                1.0 / (PI * t)
            }
            Kernel::Impulse(ref system) => return system.impulse_response(t),
        })
    }

    /// The kernel's spectrum, where it is bandlimited and piecewise linear.
    pub fn spectrum(&self) -> Option<KernelSpectrum> {
        let (shape, hilbert) = match *self {
            Kernel::Sinc => (SpectrumFn::rect(PI, 1.0).ok()?, false),
            Kernel::Conjugated => (SpectrumFn::rect(PI, 1.0).ok()?, true),
            Kernel::TrapezoidPhi { a } => (SpectrumFn::trapezoid(a).ok()?, false),
            Kernel::HilbertTrapezoid { a } => (SpectrumFn::trapezoid(a).ok()?, true),
            Kernel::Hq1 => (SpectrumFn::q1(), true),
            Kernel::Remainder | Kernel::Cauchy | Kernel::Impulse(_) => return None,
        };
        Some(KernelSpectrum { shape, hilbert })
    }

    /// Points where the closed form has a removable singularity.
    pub fn removable_points(&self) -> &'static [f64] {
        match self {
            Kernel::Remainder | Kernel::Cauchy | Kernel::Impulse(_) => &[],
            _ => &[0.0],
        }
    }
}

/// 2 sin²(πt/2)/(πt)
pub(crate) fn conjugated(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let s = sin_pi(0.5 * t);
    2.0 * s * s / (PI * t)
}

// sin A − sin B = 2 cos((A+B)/2) sin((A−B)/2) removes the cancellation near 0.
fn remainder(t: f64) -> f64 {
    cos_pi(0.75 * t) * sinc(0.25 * t) / (PI * t)
}

fn hq1(t: f64) -> f64 {
    if t.abs() < TINY {
        return 7.0 * PI * t / 24.0;
    }
    2.0 * (xms_pi(t) - xms_pi(0.5 * t)) / (PI * PI * t * t)
}
