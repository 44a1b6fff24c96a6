//! Truncated series Σ_{|k|≤N} f(k/a)·κ(t − k/a) and the measurements made on them.

mod subsequence;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signals::kernels::Kernel;
use crate::signals::{Provenance, SampledSignal};
use crate::systems::LtiSystem;

pub use subsequence::{convergent_subsequence, find_approaching_index, Approach, ApproachIndex, ScanMode, SubsequenceResult};

#[derive(Debug, Clone, Copy)]
pub struct SeriesSpec<'a> {
    pub signal: &'a SampledSignal,
    pub kernel: &'a Kernel,
    pub n: usize,
}

impl<'a> SeriesSpec<'a> {
    pub fn new(signal: &'a SampledSignal, kernel: &'a Kernel, n: usize) -> Self {
        SeriesSpec { signal, kernel, n }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        truncated_series(self, t)
    }
}

fn term(f: &SampledSignal, kernel: &Kernel, t: f64, k: i64) -> Result<f64> {
    Ok(f.sample(k) * kernel.eval(t - f.time(k))?)
}

/// Σ_{k=−N}^{N} f(k/a)·κ(t − k/a), summed in increasing k. Samples beyond the
/// support are zero and skipped.
pub fn truncated_series(spec: &SeriesSpec, t: f64) -> Result<f64> {
    let n = spec.n.min(spec.signal.half_width()) as i64;
    (-n..=n).try_fold(0.0, |acc, k| Ok(acc + term(spec.signal, spec.kernel, t, k)?))
}

/// The threshold operator: only samples with |f(k/a)| ≥ δ enter, in increasing k.
pub fn threshold_series(f: &SampledSignal, delta: f64, kernel: &Kernel, t: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be positive, got {delta}")));
    }
    let l = f.half_width() as i64;
    (-l..=l)
        .filter(|&k| f.sample(k).abs() >= delta)
        .try_fold(0.0, |acc, k| Ok(acc + term(f, kernel, t, k)?))
}

/// N(δ): the largest N with f(N) ≥ δ, for monotone symmetric Nyquist samples.
pub fn threshold_cutoff(f: &SampledSignal, delta: f64) -> Result<usize> {
    if f.provenance() != Provenance::NyquistF1 {
        return Err(Error::Unsupported(format!(
            "threshold cutoff needs monotone symmetric samples, got {:?}",
            f.provenance()
        )));
    }
    if !(delta > 0.0 && delta <= f.sample(0)) {
        return Err(Error::InvalidArgument(format!("threshold {delta} outside (0, f(0) = {}]", f.sample(0))));
    }
    let right = &f.values()[f.half_width()..];
    Ok(right.partition_point(|&v| v >= delta) - 1)
}

/// Partial sums T_0, …, T_{n_max} at t, each obtained from the previous by
/// adding f(N)κ(t − N/a) + f(−N)κ(t + N/a).
pub fn partial_sums(f: &SampledSignal, kernel: &Kernel, t: f64, n_max: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = term(f, kernel, t, 0)?;
    out.push(acc);
    for n in 1..=n_max as i64 {
        if n as usize <= f.half_width() {
            acc += term(f, kernel, t, n)? + term(f, kernel, t, -n)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// (1/M) Σ_{N=0}^{M−1} (T_N f)(t) with the system's impulse response as kernel.
pub fn cesaro_mean(f: &SampledSignal, system: &LtiSystem, m: usize, t: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let sums = partial_sums(f, &Kernel::Impulse(system.clone()), t, m - 1)?;
    Ok(sums.iter().sum::<f64>() / m as f64)
}

/// (T_N f)(t) − (T_{N−1} f)(t) for N = 1..=n_max, computed two ways.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSequence {
    /// f(N)h(t − N/a) + f(−N)h(t + N/a)
    pub direct: Vec<f64>,
    /// differences of independently summed truncated series
    pub differenced: Vec<f64>,
}

impl StepSequence {
    pub fn max_discrepancy(&self) -> f64 {
        self.direct.iter().zip(&self.differenced).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn step_sequence(f: &SampledSignal, system: &LtiSystem, t: f64, n_max: usize) -> Result<StepSequence> {
    if n_max > f.half_width() {
        return Err(Error::InvalidArgument(format!("N_max = {n_max} exceeds the support {}", f.half_width())));
    }
    let kernel = Kernel::Impulse(system.clone());
    let l = n_max as i64;
    let terms: Vec<f64> = (-l..=l).map(|k| term(f, &kernel, t, k)).collect::<Result<_>>()?;
    let at = |k: i64| terms[(k + l) as usize];
    let direct = (1..=l).map(|n| at(n) + at(-n)).collect();
    let series = |n: i64| (-n..=n).fold(0.0, |acc, k| acc + at(k));
    let mut prev = series(0);
    let differenced = (1..=l)
        .map(|n| {
            let cur = series(n);
            let d = cur - prev;
            prev = cur;
            d
        })
        .collect();
    Ok(StepSequence { direct, differenced })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumResult {
    pub max_value: f64,
    pub max_location: f64,
    pub min_value: f64,
    pub min_location: f64,
    pub window: (f64, f64),
    pub step: f64,
}

/// [−(N+2)·max(1, 1/a)·1.5, (N+2)·max(1, 1/a)·1.5]
pub fn default_window(n: usize, a: f64) -> (f64, f64) {
    let h = (n as f64 + 2.0) * (1.0f64).max(1.0 / a) * 1.5;
    (-h, h)
}

pub const DEFAULT_STEP: f64 = 0.05;

/// The points at which the divergence arguments evaluate the series.
pub fn proof_candidates(n: usize, a: f64) -> Vec<f64> {
    let n = n as f64;
    let mut c = vec![n + 1.0, (n + 1.0) / a, n + 0.5, n + 1.5];
    let neg: Vec<f64> = c.iter().map(|t| -t).collect();
    c.extend(neg);
    c
}

const REFINED: usize = 8;
const REFINE_TOL: f64 = 1e-6;

fn golden_max<F: Fn(f64) -> Result<f64>>(f: &F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > REFINE_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

fn grid(window: (f64, f64), step: f64) -> Vec<f64> {
    let n = ((window.1 - window.0) / step).ceil().max(0.0) as usize;
    (0..=n).map(|i| (window.0 + step * i as f64).min(window.1)).collect()
}

/// Best value of `f` over a grid, its top local maxima refined, and `extra` points.
fn maximize<F>(f: &F, window: (f64, f64), step: f64, extra: &[f64]) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let ts = grid(window, step);
    let vs: Vec<f64> = ts.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let mut peaks: Vec<usize> = (0..vs.len())
        .filter(|&i| (i == 0 || vs[i] >= vs[i - 1]) && (i + 1 == vs.len() || vs[i] >= vs[i + 1]))
        .collect();
    peaks.sort_by(|&i, &j| vs[j].total_cmp(&vs[i]));
    peaks.truncate(REFINED);

    let mut best = (f64::NAN, f64::NEG_INFINITY);
    let mut offer = |t: f64, v: f64| {
        if v > best.1 {
            best = (t, v);
        }
    };
    for (&t, &v) in ts.iter().zip(&vs) {
        offer(t, v);
    }
    let refined: Vec<(f64, f64)> = peaks
        .par_iter()
        .map(|&i| golden_max(f, (ts[i] - step).max(window.0), (ts[i] + step).min(window.1)))
        .collect::<Result<_>>()?;
    for (t, v) in refined {
        offer(t, v);
    }
    for &t in extra {
        offer(t, f(t)?);
    }
    Ok(best)
}

/// Max and min of the series over a window grid, refined around local extrema,
/// with the candidate points always evaluated.
pub fn extremum_search(spec: &SeriesSpec, window: (f64, f64), step: f64, candidates: &[f64]) -> Result<ExtremumResult> {
    if !(step > 0.0) || !(window.1 >= window.0) {
        return Err(Error::InvalidArgument(format!("bad search grid {window:?} step {step}")));
    }
    let (max_location, max_value) = maximize(&|t| truncated_series(spec, t), window, step, candidates)?;
    let (min_location, neg) = maximize(&|t| truncated_series(spec, t).map(|v| -v), window, step, candidates)?;
    Ok(ExtremumResult { max_value, max_location, min_value: -neg, min_location, window, step })
}

/// P_N = max over the grid of |reference(t) − truncated series(t)|, with location.
pub fn peak_error<R>(
    f: &SampledSignal,
    kernel: &Kernel,
    n: usize,
    reference: R,
    window: (f64, f64),
    step: f64,
) -> Result<(f64, f64)>
where
    R: Fn(f64) -> Result<f64> + Sync,
{
    let spec = SeriesSpec::new(f, kernel, n);
    let err = |t: f64| Ok((reference(t)? - truncated_series(&spec, t)?).abs());
    let (t, v) = maximize(&err, window, step, &[])?;
    Ok((v, t))
}

/// Λ_N(t) = Σ_{|k|≤N} |Hφ(t − k/a)| for the trapezoid kernel.
pub fn operator_norm_proxy(n: usize, a: f64, t: f64) -> Result<f64> {
    let kernel = Kernel::hilbert_trapezoid(a)?;
    let n = n as i64;
    (-n..=n).try_fold(0.0, |acc, k| Ok(acc + kernel.eval(t - k as f64 / a)?.abs()))
}

/// max Λ_N over a fine grid on [−2, 2] (step 0.01), a coarse scan of the
/// window |t| ≤ (N+2)/a, and the series candidates; returns (value, location).
pub fn operator_norm_max(n: usize, a: f64) -> Result<(f64, f64)> {
    let f = |t: f64| operator_norm_proxy(n, a, t);
    let reach = (n as f64 + 2.0) / a;
    let coarse = reach / 256.0;
    let candidates = proof_candidates(n, a);
    let near = maximize(&f, (-2.0, 2.0), 0.01, &candidates)?;
    let far = maximize(&f, (0.0, reach), coarse.max(0.01), &[])?;
    Ok(if far.1 > near.1 { (far.1, far.0) } else { (near.1, near.0) })
}

/// s′(τ) = a·Hφ(τ) − Hq₁(τ) = r(τ) − (sin aπτ − sin πτ)/((a−1)π²τ²), bounded near 0.
pub fn oversampling_residual_kernel(a: f64, tau: f64) -> Result<f64> {
    Ok(a * Kernel::hilbert_trapezoid(a)?.eval(tau)? - Kernel::Hq1.eval(tau)?)
}

/// An upper estimate of sup_t Σ_{k∈ℤ} |s′(t − k/a)|: the lattice sum over
/// |τ| ≤ 200 maximized on a 64-point grid of one period, plus the analytic
/// tail bound 2c(1/R² + a/R) from |s′(τ)| ≤ c/τ².
pub fn lattice_slack(a: f64) -> Result<f64> {
    const R: f64 = 200.0;
    let c = 4.0 / (PI * PI) + 2.0 / ((a - 1.0) * PI * PI);
    let reach = (R * a).ceil() as i64 + 1;
    let sum_at = |t: f64| -> Result<f64> {
        (-reach..=reach)
            .map(|k| t - k as f64 / a)
            .filter(|tau| tau.abs() <= R)
            .try_fold(0.0, |acc, tau| Ok(acc + oversampling_residual_kernel(a, tau)?.abs()))
    };
    let sup = (0..64)
        .into_par_iter()
        .map(|i| sum_at(i as f64 / (64.0 * a)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(sup + 2.0 * c * (1.0 / (R * R) + a / R))
}
