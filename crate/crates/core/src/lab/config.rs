use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::EpsilonSchedule;
use crate::systems::LtiSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Thm1Conjugated,
    Thm2OversampledSignal,
    Thm3Shannon,
    OversamplingKernel,
    RemarkSharpness,
    Cesaro,
    Subsequence,
    Threshold,
    PeriodicDemo,
    HardyDemo,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::Thm1Conjugated,
        ExperimentKind::Thm2OversampledSignal,
        ExperimentKind::Thm3Shannon,
        ExperimentKind::OversamplingKernel,
        ExperimentKind::RemarkSharpness,
        ExperimentKind::Cesaro,
        ExperimentKind::Subsequence,
        ExperimentKind::Threshold,
        ExperimentKind::PeriodicDemo,
        ExperimentKind::HardyDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Thm1Conjugated => "thm1_conjugated",
            ExperimentKind::Thm2OversampledSignal => "thm2_oversampled_signal",
            ExperimentKind::Thm3Shannon => "thm3_shannon",
            ExperimentKind::OversamplingKernel => "oversampling_kernel",
            ExperimentKind::RemarkSharpness => "remark_sharpness",
            ExperimentKind::Cesaro => "cesaro",
            ExperimentKind::Subsequence => "subsequence",
            ExperimentKind::Threshold => "threshold",
            ExperimentKind::PeriodicDemo => "periodic_demo",
            ExperimentKind::HardyDemo => "hardy_demo",
        }
    }

    /// Name of the sweep column in emitted tables.
    pub fn key_name(self) -> &'static str {
        match self {
            ExperimentKind::Thm1Conjugated
            | ExperimentKind::Thm2OversampledSignal
            | ExperimentKind::Thm3Shannon
            | ExperimentKind::OversamplingKernel
            | ExperimentKind::RemarkSharpness => "N",
            ExperimentKind::Cesaro | ExperimentKind::PeriodicDemo => "M",
            ExperimentKind::Subsequence => "mu",
            ExperimentKind::Threshold => "delta",
            ExperimentKind::HardyDemo => "r",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (csv | json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

/// How the max/min over t is searched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridConfig {
    /// The symmetric default window around the origin.
    Full {
        #[serde(default = "default_step")]
        step: f64,
    },
    /// Windows of the given radius around ±(N+1)·scale, where the extrema sit.
    Local {
        radius: f64,
        #[serde(default = "default_step")]
        step: f64,
    },
    /// Only the analytic candidate points.
    Candidates,
}

fn default_step() -> f64 {
    crate::series::DEFAULT_STEP
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig::Full { step: default_step() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    UnitImpulse,
    /// Samples g_M(k) for |k| ≤ truncate.
    FejerSquare { m: usize, truncate: usize },
    /// The Nyquist construction from `schedule` and `K`.
    NyquistF1,
    Custom { a: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicConfig {
    pub a: Vec<f64>,
    #[serde(default)]
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<EpsilonSchedule>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(rename = "N_list", default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(rename = "M_list", default, skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_schedule: Option<Vec<f64>>,
    /// Subsequence target; defaults to the quadrature reference (Tf)(t).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<LtiSystem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<SignalConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn need<'a, T>(value: &'a Option<T>, field: &str, kind: ExperimentKind) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| Error::Config(format!("`{field}` is required for {kind}")))
}

fn strictly_increasing<T: PartialOrd + fmt::Debug>(list: &[T], field: &str) -> Result<()> {
    if list.is_empty() {
        return Err(Error::Config(format!("`{field}` is empty")));
    }
    if let Some(w) = list.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("`{field}` must be strictly increasing ({:?} then {:?})", w[0], w[1])));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        self.experiment.ok_or_else(|| Error::Config("no experiment selected".into()))
    }

    pub(crate) fn schedule(&self) -> Result<&EpsilonSchedule> {
        need(&self.schedule, "schedule", self.kind()?)
    }

    pub(crate) fn depth(&self) -> Result<usize> {
        let kind = self.kind()?;
        match *need(&self.k, "K", kind)? {
            0 => Err(Error::Config(format!("empty construction: K = 0 gives no weights for {kind}"))),
            k => Ok(k),
        }
    }

    pub(crate) fn factor(&self) -> Result<f64> {
        let a = *need(&self.a, "a", self.kind()?)?;
        if a.is_finite() && a > 1.0 {
            Ok(a)
        } else {
            Err(Error::Config(format!("`a` must exceed 1, got {a}")))
        }
    }

    pub(crate) fn n_list(&self) -> Result<&[usize]> {
        let list = need(&self.n_list, "N_list", self.kind()?)?;
        strictly_increasing(list, "N_list")?;
        if list[0] == 0 {
            return Err(Error::Config("`N_list` entries must be at least 1".into()));
        }
        Ok(list)
    }

    pub(crate) fn m_list(&self) -> Result<&[usize]> {
        let list = need(&self.m_list, "M_list", self.kind()?)?;
        strictly_increasing(list, "M_list")?;
        if list[0] == 0 {
            return Err(Error::Config("`M_list` entries must be at least 1".into()));
        }
        Ok(list)
    }

    pub(crate) fn time(&self) -> Result<f64> {
        let t = *need(&self.t, "t", self.kind()?)?;
        if t.is_finite() {
            Ok(t)
        } else {
            Err(Error::Config("`t` must be finite".into()))
        }
    }

    pub(crate) fn system(&self) -> LtiSystem {
        self.system.clone().unwrap_or_else(LtiSystem::hilbert)
    }

    /// Checks that every field the selected experiment reads is present and valid.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind()?;
        use ExperimentKind::*;
        match kind {
            Thm1Conjugated | Thm3Shannon => {
                self.schedule()?;
                self.depth()?;
                self.n_list()?;
            }
            Thm2OversampledSignal => {
                self.schedule()?;
                self.depth()?;
                self.n_list()?;
                let s = *need(&self.sigma, "sigma", kind)?;
                if !(s > 0.0 && s <= std::f64::consts::PI) {
                    return Err(Error::Config(format!("`sigma` must lie in (0, π], got {s}")));
                }
            }
            OversamplingKernel => {
                self.schedule()?;
                self.depth()?;
                self.factor()?;
                self.n_list()?;
            }
            RemarkSharpness => {
                self.factor()?;
                if self.n_list()?[0] < 2 {
                    return Err(Error::Config("`N_list` must start at 2 or above (log N normalizer)".into()));
                }
            }
            Cesaro => {
                self.m_list()?;
                self.time()?;
            }
            Subsequence => {
                self.time()?;
                need(&self.n_max, "n_max", kind)?;
                let mus = need(&self.mu_schedule, "mu_schedule", kind)?;
                if mus.is_empty() || mus.iter().any(|&m| !(m > 0.0)) || mus.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(Error::Config("`mu_schedule` must be positive and strictly decreasing".into()));
                }
            }
            Threshold => {
                self.schedule()?;
                self.depth()?;
                let d = need(&self.deltas, "deltas", kind)?;
                if d.is_empty() || d.iter().any(|&x| !(x > 0.0)) {
                    return Err(Error::Config("`deltas` must be a nonempty list of positive thresholds".into()));
                }
            }
            PeriodicDemo => {
                self.m_list()?;
            }
            HardyDemo => {
                let e = *need(&self.epsilon, "epsilon", kind)?;
                if !(e > 0.0) {
                    return Err(Error::Config(format!("`epsilon` must be positive, got {e}")));
                }
                if *need(&self.terms, "terms", kind)? == 0 {
                    return Err(Error::Config("`terms` must be at least 1".into()));
                }
                let rs = need(&self.r_list, "r_list", kind)?;
                strictly_increasing(rs, "r_list")?;
                if rs.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
                    return Err(Error::Config("`r_list` radii must lie in (0, 1)".into()));
                }
            }
        }
        if matches!(self.signal, Some(SignalConfig::NyquistF1)) {
            self.schedule()?;
            self.depth()?;
        }
        Ok(())
    }
}
