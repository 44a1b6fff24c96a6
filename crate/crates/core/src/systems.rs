//! Stable LTI systems on PW_π given by a bounded frequency response on [−π, π].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signals::kernels::conjugated;
use crate::signals::{inverse_fourier, Spectrum, SpectrumFn};
use crate::num::sinc;

const REAL_LIMIT: f64 = 1e-9;
const OUTPUT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Response {
    /// ĥ = 1
    Identity,
    /// ĥ = −i·sgn(ω)
    Hilbert,
    /// ĥ = re + i·im, both piecewise linear inside [−π, π].
    Custom { re: SpectrumFn, im: SpectrumFn },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Response", into = "Response")]
pub struct LtiSystem {
    response: Response,
    norm: f64,
}

impl From<LtiSystem> for Response {
    fn from(s: LtiSystem) -> Self {
        s.response
    }
}

impl TryFrom<Response> for LtiSystem {
    type Error = Error;

    fn try_from(r: Response) -> Result<Self> {
        match r {
            Response::Identity => Ok(LtiSystem::identity()),
            Response::Hilbert => Ok(LtiSystem::hilbert()),
            Response::Custom { re, im } => LtiSystem::custom(re, im),
        }
    }
}

impl LtiSystem {
    pub fn identity() -> Self {
        LtiSystem { response: Response::Identity, norm: 1.0 }
    }

    pub fn hilbert() -> Self {
        LtiSystem { response: Response::Hilbert, norm: 1.0 }
    }

    pub fn custom(re: SpectrumFn, im: SpectrumFn) -> Result<Self> {
        for part in [&re, &im] {
            if part.band() > PI * (1.0 + 1e-12) {
                return Err(Error::InvalidSpectrum(format!(
                    "frequency response must live in [−π, π], got band {}",
                    part.band()
                )));
            }
        }
        // |ĥ|² is convex between consecutive breakpoints of either part.
        let norm = re
            .points()
            .iter()
            .chain(im.points())
            .map(|&(w, _)| Complex64::new(re.value(w), im.value(w)).norm())
            .fold(0.0, f64::max);
        Ok(LtiSystem { response: Response::Custom { re, im }, norm })
    }

    pub fn response(&self) -> &Response {
        &self.response
    }

    /// ‖T‖ = ess sup |ĥ_T|.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn response_at(&self, omega: f64) -> Complex64 {
        if omega.abs() > PI {
            return Complex64::new(0.0, 0.0);
        }
        match &self.response {
            Response::Identity => Complex64::new(1.0, 0.0),
            Response::Hilbert => Complex64::new(0.0, if omega > 0.0 { -1.0 } else if omega < 0.0 { 1.0 } else { 0.0 }),
            Response::Custom { re, im } => Complex64::new(re.value(omega), im.value(omega)),
        }
    }

    fn kinks(&self) -> Vec<f64> {
        let mut k = vec![-PI, 0.0, PI];
        if let Response::Custom { re, im } = &self.response {
            k.extend(re.points().iter().chain(im.points()).map(|p| p.0));
        }
        k
    }

    /// h_T(t); closed forms for the built-ins.
    pub fn impulse_response(&self, t: f64) -> Result<f64> {
        match self.response {
            Response::Identity => Ok(sinc(t)),
            Response::Hilbert => Ok(conjugated(t)),
            Response::Custom { .. } => self.impulse_response_quadrature(t),
        }
    }

    /// h_T(t) = (1/2π)∫ ĥ_T(ω) e^{iωt} dω by quadrature, whatever the response.
    pub fn impulse_response_quadrature(&self, t: f64) -> Result<f64> {
        let v = inverse_fourier(|w| self.response_at(w), PI, &self.kinks(), 0.0, t, OUTPUT_TOL)?;
        real_part(v)
    }

    /// (Tf)(t) = (1/2π)∫ f̂(ω) ĥ_T(ω) e^{iωt} dω.
    pub fn reference_output(&self, f: &dyn Spectrum, t: f64) -> Result<f64> {
        if f.band() > PI * (1.0 + 1e-12) {
            return Err(Error::Unsupported(format!("input spectrum extends to {} beyond π", f.band())));
        }
        let mut kinks = self.kinks();
        kinks.extend(f.kinks());
        let v = inverse_fourier(|w| f.eval(w) * self.response_at(w), PI, &kinks, f.rate(), t, OUTPUT_TOL)?;
        real_part(v)
    }
}

fn real_part(v: Complex64) -> Result<f64> {
    if v.im.abs() >= REAL_LIMIT {
        return Err(Error::NotReal { residual: v.im.abs(), limit: REAL_LIMIT });
    }
    Ok(v.re)
}
