//! Index selection for subsequences converging to a prescribed value.
//!
//! Past the first index where the sequence sits outside the target window, the
//! scan tracks whether it has seen values below and above. If every step from
//! there on is at most μ/2, the sequence cannot jump over a window of width 4μ,
//! so the first hit is certified by that step bound. Otherwise the hit was
//! found by plain exhaustive scanning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    /// The first admissible index was already inside the window.
    Immediate,
    /// Reached with all steps ≤ μ/2 since the sequence was first seen outside.
    StepBridge,
    /// Reached only by scanning; some step exceeded μ/2.
    Exhaustive,
}

/// Where the scanned values lay before the window was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Inside,
    FromBelow,
    FromAbove,
    Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproachIndex {
    pub index: usize,
    pub mode: ScanMode,
    pub approach: Approach,
    /// First scanned index below target − 2μ.
    pub first_below: Option<usize>,
    /// First scanned index above target + 2μ.
    pub first_above: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsequenceResult {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub target: f64,
    pub mu_schedule: Vec<f64>,
    pub steps: Vec<ApproachIndex>,
}

fn scan(values: &[f64], target: f64, mu: f64, start: usize) -> Result<ApproachIndex> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {mu}")));
    }
    let width = 2.0 * mu;
    let (mut below, mut above) = (None, None);
    let mut bridged = true;
    for (j, &v) in values.iter().enumerate().skip(start) {
        if (v - target).abs() <= width {
            let approach = match (below, above) {
                (None, None) => Approach::Inside,
                (Some(_), None) => Approach::FromBelow,
                (None, Some(_)) => Approach::FromAbove,
                (Some(_), Some(_)) => Approach::Crossing,
            };
            let mode = if j == start {
                ScanMode::Immediate
            } else if bridged {
                ScanMode::StepBridge
            } else {
                ScanMode::Exhaustive
            };
            return Ok(ApproachIndex { index: j, mode, approach, first_below: below, first_above: above });
        }
        if v < target {
            below.get_or_insert(j);
        } else {
            above.get_or_insert(j);
        }
        if let Some(&next) = values.get(j + 1) {
            bridged &= (next - v).abs() <= 0.5 * mu;
        }
    }
    Err(Error::NotFound { lower: start.saturating_sub(1), target, width, scanned: values.len().saturating_sub(1) })
}

/// The smallest index N̂ > `lower` with |values[N̂] − target| ≤ 2μ.
pub fn find_approaching_index(values: &[f64], target: f64, mu: f64, lower: usize) -> Result<ApproachIndex> {
    scan(values, target, mu, lower + 1)
}

/// Strictly increasing indices whose values lie within 2μ_j of `target`; the
/// first index may be 0.
pub fn convergent_subsequence(values: &[f64], target: f64, mu_schedule: &[f64]) -> Result<SubsequenceResult> {
    if mu_schedule.is_empty() {
        return Err(Error::InvalidArgument("empty tolerance schedule".into()));
    }
    if mu_schedule.iter().any(|&m| !(m > 0.0)) || mu_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("tolerances must be positive and strictly decreasing".into()));
    }
    let mut result = SubsequenceResult {
        indices: Vec::new(),
        values: Vec::new(),
        target,
        mu_schedule: mu_schedule.to_vec(),
        steps: Vec::new(),
    };
    for &mu in mu_schedule {
        let start = result.indices.last().map_or(0, |&i| i + 1);
        match scan(values, target, mu, start) {
            Ok(hit) => {
                result.indices.push(hit.index);
                result.values.push(values[hit.index]);
                result.steps.push(hit);
            }
            Err(cause) => return Err(Error::Incomplete { partial: Box::new(result), cause: Box::new(cause) }),
        }
    }
    Ok(result)
}
