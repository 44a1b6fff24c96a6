//! Null sequences ε_N, their nonincreasing tail envelopes ε̄_N = max_{M≥N} ε_M,
//! break indices N_k and telescoping weights δ_k = √ε̄_{N_k} − √ε̄_{N_{k+1}}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Longest run the greedy break scan accepts without the envelope dropping.
const MAX_PLATEAU: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// ε_N = N^(−β)
    Power { beta: f64 },
    /// ε_N = 1/log(N+2)
    Log,
    /// ε_N = ratio^N with 0 < ratio < 1, defined while it stays a normal f64.
    Geometric { ratio: f64 },
    /// ε_N = values[N−1] for N = 1..=len.
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleSpec", into = "ScheduleSpec")]
pub struct EpsilonSchedule {
    family: Family,
    tail_monotone_from: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleSpec {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(default = "one")]
    tail_monotone_from: usize,
}

fn one() -> usize {
    1
}

impl TryFrom<ScheduleSpec> for EpsilonSchedule {
    type Error = Error;

    fn try_from(spec: ScheduleSpec) -> Result<Self> {
        let missing = |field: &str| Error::InvalidSchedule(format!("family `{}` needs `{field}`", spec.family));
        let family = match spec.family.as_str() {
            "power" => Family::Power { beta: spec.beta.ok_or_else(|| missing("beta"))? },
            "log" => Family::Log,
            "geometric" => Family::Geometric { ratio: spec.ratio.ok_or_else(|| missing("ratio"))? },
            "table" => Family::Table { values: spec.values.clone().ok_or_else(|| missing("values"))? },
            other => return Err(Error::InvalidSchedule(format!("unknown family `{other}`"))),
        };
        EpsilonSchedule::new(family, spec.tail_monotone_from)
    }
}

impl From<EpsilonSchedule> for ScheduleSpec {
    fn from(s: EpsilonSchedule) -> Self {
        let mut spec = ScheduleSpec {
            family: String::new(),
            beta: None,
            ratio: None,
            values: None,
            tail_monotone_from: s.tail_monotone_from,
        };
        match s.family {
            Family::Power { beta } => {
                spec.family = "power".into();
                spec.beta = Some(beta);
            }
            Family::Log => spec.family = "log".into(),
            Family::Geometric { ratio } => {
                spec.family = "geometric".into();
                spec.ratio = Some(ratio);
            }
            Family::Table { values } => {
                spec.family = "table".into();
                spec.values = Some(values);
            }
        }
        spec
    }
}

impl EpsilonSchedule {
    pub fn new(family: Family, tail_monotone_from: usize) -> Result<Self> {
        if tail_monotone_from == 0 {
            return Err(Error::InvalidSchedule("tail_monotone_from must be at least 1".into()));
        }
        match &family {
            Family::Power { beta } if !(beta.is_finite() && *beta > 0.0) => {
                return Err(Error::InvalidSchedule(format!("power exponent must be positive, got {beta}")));
            }
            Family::Geometric { ratio } if !(*ratio > 0.0 && *ratio < 1.0) => {
                return Err(Error::InvalidSchedule(format!("geometric ratio must lie in (0, 1), got {ratio}")));
            }
            Family::Table { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidSchedule("empty table".into()));
                }
                if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
                    return Err(Error::InvalidSchedule(format!("entry {} is {v}, must be positive", i + 1)));
                }
                if tail_monotone_from > values.len() {
                    return Err(Error::InvalidSchedule(format!(
                        "tail_monotone_from = {tail_monotone_from} exceeds table length {}",
                        values.len()
                    )));
                }
                let tail = &values[tail_monotone_from - 1..];
                if let Some(i) = tail.windows(2).position(|w| w[1] > w[0]) {
                    return Err(Error::InvalidSchedule(format!(
                        "table increases at N = {} although declared monotone from {tail_monotone_from}",
                        tail_monotone_from + i + 1
                    )));
                }
            }
            _ => {}
        }
        Ok(EpsilonSchedule { family, tail_monotone_from })
    }

    pub fn power(beta: f64) -> Result<Self> {
        Self::new(Family::Power { beta }, 1)
    }

    pub fn log() -> Self {
        EpsilonSchedule { family: Family::Log, tail_monotone_from: 1 }
    }

    pub fn geometric(ratio: f64) -> Result<Self> {
        Self::new(Family::Geometric { ratio }, 1)
    }

    pub fn table(values: Vec<f64>, tail_monotone_from: usize) -> Result<Self> {
        Self::new(Family::Table { values }, tail_monotone_from)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn tail_monotone_from(&self) -> usize {
        self.tail_monotone_from
    }

    /// Largest admissible index, if the schedule is finite.
    pub fn max_index(&self) -> Option<usize> {
        match &self.family {
            Family::Table { values } => Some(values.len()),
            Family::Geometric { ratio } => {
                let normal = |n: usize| ratio.powi(n as i32) >= f64::MIN_POSITIVE;
                let mut n = (f64::MIN_POSITIVE.ln() / ratio.ln()).floor() as usize;
                while n > 1 && !normal(n) {
                    n -= 1;
                }
                while normal(n + 1) {
                    n += 1;
                }
                Some(n)
            }
            _ => None,
        }
    }

    pub fn eps(&self, n: usize) -> Result<f64> {
        let max = self.max_index().unwrap_or(usize::MAX);
        if n == 0 || n > max {
            return Err(Error::OutOfRange { index: n, max });
        }
        Ok(match &self.family {
            Family::Power { beta } => (n as f64).powf(-beta),
            Family::Log => 1.0 / ((n + 2) as f64).ln(),
            Family::Geometric { ratio } => ratio.powi(n as i32),
            Family::Table { values } => values[n - 1],
        })
    }

    /// ε̄_N: the maximum of ε over indices ≥ N.
    pub fn tail_envelope(&self, n: usize) -> Result<f64> {
        let head = self.eps(n)?;
        if n >= self.tail_monotone_from {
            return Ok(head);
        }
        (n + 1..=self.tail_monotone_from).try_fold(head, |m, j| Ok(m.max(self.eps(j)?)))
    }

    /// Greedy break selection: N_1 = 1, then each next break is the smallest
    /// index whose envelope lies strictly below the previous break's.
    pub fn pick_breaks(&self, k: usize) -> Result<BreakPlan> {
        if k == 0 {
            return Err(Error::InvalidArgument("K must be at least 1".into()));
        }
        let last = self.max_index().unwrap_or(usize::MAX);
        let mut breaks = vec![1];
        let mut envelope = vec![self.tail_envelope(1)?];

        // Within the monotone tail the envelope is ε itself, so the prefix
        // maxima only need to be computed once.
        let head: Vec<f64> = (1..self.tail_monotone_from.min(last))
            .map(|n| self.tail_envelope(n))
            .collect::<Result<_>>()?;
        let env = |n: usize| if n <= head.len() { Ok(head[n - 1]) } else { self.eps(n) };

        let mut n = 1;
        while breaks.len() <= k {
            let prev = *envelope.last().unwrap();
            let start = n;
            loop {
                if n == last || n - start >= MAX_PLATEAU {
                    return Err(Error::NoBreaks { found: breaks.len(), wanted: k + 1 });
                }
                n += 1;
                let e = env(n)?;
                if e < prev {
                    breaks.push(n);
                    envelope.push(e);
                    break;
                }
            }
        }
        BreakPlan::new(breaks, envelope)
    }
}

/// Breaks N_1 < … < N_{K+1}, the envelope at each break and the weights δ_1..δ_K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakPlan {
    breaks: Vec<usize>,
    envelope: Vec<f64>,
    weights: Vec<f64>,
}

impl BreakPlan {
    pub fn new(breaks: Vec<usize>, envelope: Vec<f64>) -> Result<Self> {
        if breaks.len() < 2 || breaks.len() != envelope.len() {
            return Err(Error::InvalidSchedule(format!(
                "a plan needs K+1 ≥ 2 breaks with one envelope value each (got {} breaks, {} values)",
                breaks.len(),
                envelope.len()
            )));
        }
        if breaks[0] == 0 || breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSchedule("breaks must be positive and strictly increasing".into()));
        }
        let weights = weights(&envelope)?;
        Ok(BreakPlan { breaks, envelope, weights })
    }

    /// K, the number of weights.
    pub fn depth(&self) -> usize {
        self.weights.len()
    }

    pub fn breaks(&self) -> &[usize] {
        &self.breaks
    }

    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// N_{K+1}.
    pub fn last_break(&self) -> usize {
        *self.breaks.last().unwrap()
    }

    /// The 1-based k̂ with N_k̂ ≤ n < N_{k̂+1}, if n lies inside the plan.
    pub fn segment_of(&self, n: usize) -> Option<usize> {
        if n < self.breaks[0] || n >= self.last_break() {
            return None;
        }
        Some(self.breaks.partition_point(|&b| b <= n))
    }

    /// √ε̄_{N_k̂} − √ε̄_{N_{K+1}} for the segment containing n (0 past the last break).
    pub fn truncated_tail(&self, n: usize) -> f64 {
        match self.segment_of(n) {
            Some(k) => self.weights[k - 1..].iter().sum(),
            None if n < self.breaks[0] => self.weights.iter().sum(),
            None => 0.0,
        }
    }
}

/// δ_k = √ε̄_{N_k} − √ε̄_{N_{k+1}} for a strictly decreasing list of envelope values.
pub fn weights(envelope: &[f64]) -> Result<Vec<f64>> {
    if let Some(v) = envelope.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidSchedule(format!("envelope value {v} is not positive")));
    }
    envelope
        .windows(2)
        .map(|w| {
            let d = w[0].sqrt() - w[1].sqrt();
            if w[1] < w[0] && d > 0.0 {
                Ok(d)
            } else {
                Err(Error::InvalidSchedule(format!("envelope not strictly decreasing at {} → {}", w[0], w[1])))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_table() -> EpsilonSchedule {
        EpsilonSchedule::table(vec![0.5, 0.9, 0.3, 0.3, 0.1], 3).unwrap()
    }

    #[test]
    fn envelope_of_monotone_sequence_is_itself() {
        let s = EpsilonSchedule::power(1.0).unwrap();
        assert_eq!(s.tail_envelope(7).unwrap(), 1.0 / 7.0);
    }

    #[test]
    fn envelope_of_table() {
        let s = example_table();
        let brute = |n: usize| (n..=5).map(|m| s.eps(m).unwrap()).fold(0.0, f64::max);
        for n in 1..=5 {
            assert_eq!(s.tail_envelope(n).unwrap(), brute(n));
        }
        assert_eq!(s.tail_envelope(1).unwrap(), 0.9);
        assert_eq!(s.tail_envelope(3).unwrap(), 0.3);
    }

    #[test]
    fn table_breaks() {
        let plan = example_table().pick_breaks(1).unwrap();
        assert_eq!(plan.breaks(), &[1, 3]);
        assert_eq!(plan.envelope(), &[0.9, 0.3]);
        let plan = example_table().pick_breaks(2).unwrap();
        assert_eq!(plan.breaks(), &[1, 3, 5]);
        assert_eq!(
            example_table().pick_breaks(3).unwrap_err(),
            Error::NoBreaks { found: 3, wanted: 4 }
        );
    }

    #[test]
    fn constant_table_has_no_breaks() {
        let s = EpsilonSchedule::table(vec![0.2; 6], 1).unwrap();
        assert!(matches!(s.pick_breaks(1), Err(Error::NoBreaks { found: 1, wanted: 2 })));
    }

    #[test]
    fn geometric_and_log_breaks() {
        let g = EpsilonSchedule::geometric(0.5).unwrap();
        let plan = g.pick_breaks(2).unwrap();
        assert_eq!(plan.breaks(), &[1, 2, 3]);
        let w = plan.weights();
        assert!((w[0] - (0.5f64.sqrt() - 0.5)).abs() < 1e-15);
        assert!((w[1] - (0.5 - 0.125f64.sqrt())).abs() < 1e-15);
        assert!((w[0] - 0.207107).abs() < 1e-6 && (w[1] - 0.146447).abs() < 1e-6);

        assert_eq!(EpsilonSchedule::log().pick_breaks(1).unwrap().breaks(), &[1, 2]);
    }

    #[test]
    fn geometric_range_is_bounded() {
        let g = EpsilonSchedule::geometric(0.5).unwrap();
        let max = g.max_index().unwrap();
        assert_eq!(max, 1022);
        assert!(g.eps(max).unwrap() >= f64::MIN_POSITIVE);
        assert!(matches!(g.eps(max + 1), Err(Error::OutOfRange { .. })));
        assert!(g.pick_breaks(max - 1).is_ok());
        assert!(matches!(g.pick_breaks(max), Err(Error::NoBreaks { .. })));
    }

    #[test]
    fn weights_telescoping_example() {
        let w = weights(&[1.0, 0.25, 0.0625]).unwrap();
        assert_eq!(w, vec![0.5, 0.25]);
        assert!(weights(&[0.3, 0.3]).is_err());
        assert!(weights(&[0.3, -0.1]).is_err());
    }

    #[test]
    fn invalid_schedules_rejected() {
        assert!(EpsilonSchedule::table(vec![0.5, 0.0], 1).is_err());
        assert!(EpsilonSchedule::table(vec![0.5, 0.6], 1).is_err());
        assert!(EpsilonSchedule::table(vec![0.5, 0.6], 2).is_ok());
        assert!(EpsilonSchedule::power(0.0).is_err());
        assert!(EpsilonSchedule::geometric(1.0).is_err());
    }

    #[test]
    fn segments_and_tails() {
        let plan = EpsilonSchedule::geometric(0.5).unwrap().pick_breaks(2).unwrap();
        assert_eq!(plan.segment_of(1), Some(1));
        assert_eq!(plan.segment_of(2), Some(2));
        assert_eq!(plan.segment_of(3), None);
        assert_eq!(plan.truncated_tail(1), plan.weights()[0] + plan.weights()[1]);
        assert_eq!(plan.truncated_tail(2), plan.weights()[1]);
        assert_eq!(plan.truncated_tail(3), 0.0);
    }

    #[test]
    fn json_shape() {
        let s: EpsilonSchedule =
            serde_json::from_str(r#"{"family":"table","values":[0.5,0.9,0.3,0.3,0.1],"tail_monotone_from":3}"#)
                .unwrap();
        assert_eq!(s, example_table());
        let back: EpsilonSchedule = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        let err = serde_json::from_str::<EpsilonSchedule>(r#"{"family":"power","tail_monotone_from":1}"#);
        assert!(err.unwrap_err().to_string().contains("beta"));
    }

    #[test]
    fn built_in_families_decay_over_three_decades() {
        for s in [EpsilonSchedule::power(0.5).unwrap(), EpsilonSchedule::geometric(0.9).unwrap()] {
            assert!(s.eps(1000).unwrap() < s.eps(1).unwrap() / 10.0);
        }
        // 1/log(N+2) is the slow one: a decimal order needs N near e^{10 log 3}.
        let log = EpsilonSchedule::log();
        assert!(log.eps(60_000).unwrap() < log.eps(1).unwrap() / 10.0);
    }

    fn schedules() -> impl Strategy<Value = EpsilonSchedule> {
        prop_oneof![
            (0.05f64..3.0).prop_map(|b| EpsilonSchedule::power(b).unwrap()),
            Just(EpsilonSchedule::log()),
            (0.05f64..0.95).prop_map(|r| EpsilonSchedule::geometric(r).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn telescoping_holds(s in schedules(), k in 1usize..=64) {
            let plan = s.pick_breaks(k).unwrap();
            let env = plan.envelope();
            let lhs: f64 = plan.weights().iter().sum::<f64>() + env[k].sqrt();
            prop_assert!(((lhs - env[0].sqrt()) / env[0].sqrt()).abs() <= 1e-12);
            prop_assert!(plan.weights().iter().all(|&d| d > 0.0));
            prop_assert!(env.windows(2).all(|w| w[1] < w[0]));
        }

        #[test]
        fn envelope_dominates_and_is_nonincreasing(
            values in prop::collection::vec(0.01f64..1.0, 2..40),
            from_frac in 0.0f64..1.0,
        ) {
            let mut values = values;
            let t = 1 + ((values.len() - 1) as f64 * from_frac) as usize;
            // make the declared tail monotone
            values[t - 1..].sort_by(|a, b| b.total_cmp(a));
            let s = EpsilonSchedule::table(values.clone(), t).unwrap();
            let env: Vec<f64> = (1..=values.len()).map(|n| s.tail_envelope(n).unwrap()).collect();
            for n in 0..values.len() {
                prop_assert!(env[n] >= values[n]);
                let brute = values[n..].iter().copied().fold(0.0, f64::max);
                prop_assert_eq!(env[n], brute);
            }
            prop_assert!(env.windows(2).all(|w| w[1] <= w[0]));
        }

        #[test]
        fn envelope_is_idempotent(values in prop::collection::vec(0.01f64..1.0, 1..40)) {
            let mut values = values;
            values.sort_by(|a, b| b.total_cmp(a));
            let s = EpsilonSchedule::table(values.clone(), 1).unwrap();
            for (n, v) in values.iter().enumerate() {
                prop_assert_eq!(s.tail_envelope(n + 1).unwrap(), *v);
            }
        }
    }
}
