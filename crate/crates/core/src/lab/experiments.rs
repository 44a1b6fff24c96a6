use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::periodic::{
    conj_partial_fourier, conj_partial_fourier_quadrature, fejer_mean_periodic, hardy_lower_bound, hardy_radial_max,
    partial_fourier, radial_max_on_grid, PeriodicSignal, PowerSeriesFn, RADIAL_GRID,
};
use crate::schedule::{BreakPlan, EpsilonSchedule};
use crate::series::{
    cesaro_mean, convergent_subsequence, default_window, extremum_search, lattice_slack, operator_norm_max,
    partial_sums, proof_candidates, threshold_cutoff, threshold_series, truncated_series, ExtremumResult, SeriesSpec,
};
use crate::signals::{
    adversarial_nyquist, adversarial_oversampling, fejer_square, modulate, oversampling_support, pw1_norm, BandSplit,
    Kernel, NyquistSpectrum, SampledSignal,
};

use super::config::{ExperimentConfig, ExperimentKind, GridConfig, PeriodicConfig, SignalConfig};
use super::report::{ExperimentReport, Record, ReportHeader, SCHEMA_VERSION};

// Allowance for quadrature error in the band-split samples.
const SPLIT_SLACK: f64 = 1e-9;

/// Runs the configured sweep. Per-record failures become records with an
/// `error` field; configuration problems abort.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let kind = config.kind()?;
    let start = Instant::now();
    use ExperimentKind::*;
    let mut rows = match kind {
        Thm1Conjugated => thm1(config)?,
        Thm2OversampledSignal => thm2(config)?,
        Thm3Shannon => thm3(config)?,
        OversamplingKernel => oversampling(config)?,
        RemarkSharpness => remark(config)?,
        Cesaro => cesaro(config)?,
        Subsequence => subsequence(config)?,
        Threshold => threshold(config)?,
        PeriodicDemo => periodic(config)?,
        HardyDemo => hardy(config)?,
    };
    rows.sort_by(|a, b| a.0.key.total_cmp(&b.0.key));
    let (records, timings_ms): (Vec<Record>, Vec<f64>) = rows.into_iter().unzip();
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        experiment: kind,
        key_name: kind.key_name().to_string(),
        config: config.clone(),
        header: ReportHeader {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            timings_ms,
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        records,
    })
}

type Rows = Vec<(Record, f64)>;

fn sweep<K, F>(keys: &[K], key_of: impl Fn(K) -> f64 + Sync, f: F) -> Rows
where
    K: Copy + Send + Sync,
    F: Fn(K) -> Result<Record> + Sync,
{
    keys.par_iter()
        .map(|&k| {
            let start = Instant::now();
            let record = f(k).unwrap_or_else(|e| Record::failed(key_of(k), &e));
            (record, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect()
}

fn plan(config: &ExperimentConfig) -> Result<BreakPlan> {
    config.schedule()?.pick_breaks(config.depth()?)
}

/// ε_N·log N, when defined and positive.
pub fn log_normalizer(schedule: &EpsilonSchedule, n: usize) -> Option<f64> {
    schedule.eps(n).ok().map(|e| e * (n as f64).ln()).filter(|v| *v > 0.0)
}

/// Extremum search for the N-th series according to the grid mode; `center`
/// is where the proofs place the maximizer.
pub fn search(spec: &SeriesSpec, center: f64, a: f64, grid: GridConfig) -> Result<ExtremumResult> {
    let candidates = proof_candidates(spec.n, a);
    match grid {
        GridConfig::Full { step } => extremum_search(spec, default_window(spec.n, a), step, &candidates),
        GridConfig::Local { radius, step } => {
            let right = extremum_search(spec, (center - radius, center + radius), step, &candidates)?;
            let left = extremum_search(spec, (-center - radius, -center + radius), step, &candidates)?;
            let (max_value, max_location) =
                if left.max_value > right.max_value { (left.max_value, left.max_location) } else { (right.max_value, right.max_location) };
            let (min_value, min_location) =
                if left.min_value < right.min_value { (left.min_value, left.min_location) } else { (right.min_value, right.min_location) };
            Ok(ExtremumResult { max_value, max_location, min_value, min_location, window: (-center - radius, center + radius), step })
        }
        GridConfig::Candidates => {
            let mut r = ExtremumResult {
                max_value: f64::NEG_INFINITY,
                max_location: 0.0,
                min_value: f64::INFINITY,
                min_location: 0.0,
                window: (-center, center),
                step: 0.0,
            };
            for t in candidates {
                let v = spec.eval(t)?;
                if v > r.max_value {
                    (r.max_value, r.max_location) = (v, t);
                }
                if v < r.min_value {
                    (r.min_value, r.min_location) = (v, t);
                }
            }
            Ok(r)
        }
    }
}

/// (1/π)·log(2N+3)·(truncated tail)
pub fn conjugated_bound(plan: &BreakPlan, n: usize) -> f64 {
    ((2 * n + 3) as f64).ln() / PI * plan.truncated_tail(n)
}

/// (1/π)·log(N)·(truncated tail)
pub fn shannon_bound(plan: &BreakPlan, n: usize) -> f64 {
    (n as f64).ln() / PI * plan.truncated_tail(n)
}

/// (a/2π)·log(2N+2)·(truncated tail)
pub fn oversampling_bound(plan: &BreakPlan, a: f64, n: usize) -> f64 {
    a / (2.0 * PI) * ((2 * n + 2) as f64).ln() * plan.truncated_tail(n)
}

/// Maximizing and minimizing evaluation points of S_N f₂.
pub fn shannon_points(n: usize) -> (f64, f64) {
    let n_f = n as f64;
    if n % 2 == 0 {
        (n_f + 0.5, n_f + 1.5)
    } else {
        (n_f + 1.5, n_f + 0.5)
    }
}

fn thm1(config: &ExperimentConfig) -> Result<Rows> {
    let schedule = config.schedule()?;
    let plan = plan(config)?;
    let f = adversarial_nyquist(&plan);
    let grid = config.grid.unwrap_or_default();
    let kernel = Kernel::Conjugated;
    Ok(sweep(config.n_list()?, |n| n as f64, |n| {
        let spec = SeriesSpec::new(&f, &kernel, n);
        let t = n as f64 + 1.0;
        let ext = search(&spec, t, 1.0, grid)?;
        let (plus, minus) = (spec.eval(t)?, spec.eval(-t)?);
        let bound = conjugated_bound(&plan, n);
        let mut r = Record::new(n as f64);
        r.value = Some(ext.max_value);
        r.location = Some(ext.max_location);
        r.normalize(log_normalizer(schedule, n));
        r.bound = Some(bound);
        r.bound_satisfied = Some(plus >= bound && minus <= -bound);
        r.aux = Some(plus);
        Ok(r)
    }))
}

fn thm2(config: &ExperimentConfig) -> Result<Rows> {
    let schedule = config.schedule()?;
    let plan = plan(config)?;
    let sigma = config.sigma.expect("validated");
    let n_list = config.n_list()?;
    let split = BandSplit::new(&plan, sigma)?;
    let f = split.signal(*n_list.last().unwrap())?;
    let tail_l2 = split.at(0)?.tail_l2;
    let grid = config.grid.unwrap_or_default();
    let kernel = Kernel::Conjugated;
    Ok(sweep(n_list, |n| n as f64, |n| {
        let spec = SeriesSpec::new(&f, &kernel, n);
        let t = n as f64 + 1.0;
        let ext = search(&spec, t, 1.0, grid)?;
        let (plus, minus) = (spec.eval(t)?, spec.eval(-t)?);
        let bound = conjugated_bound(&plan, n) - tail_l2 - SPLIT_SLACK;
        let mut r = Record::new(n as f64);
        r.value = Some(ext.max_value);
        r.location = Some(ext.max_location);
        r.normalize(log_normalizer(schedule, n));
        r.bound = Some(bound);
        r.bound_satisfied = Some(plus >= bound && minus <= -bound);
        r.aux = Some(plus);
        Ok(r)
    }))
}

/// (1/π)·Σ_{|l|≤N} f₁(l)/(N + 3/2 − l)
pub fn shannon_intermediate(f1: &SampledSignal, n: usize) -> f64 {
    let n_i = n as i64;
    (-n_i..=n_i).map(|l| f1.sample(l) / (n as f64 + 1.5 - l as f64)).sum::<f64>() / PI
}

fn thm3(config: &ExperimentConfig) -> Result<Rows> {
    let schedule = config.schedule()?;
    let plan = plan(config)?;
    let f1 = adversarial_nyquist(&plan);
    let f2 = modulate(&f1)?;
    let grid = config.grid.unwrap_or_default();
    let kernel = Kernel::Sinc;
    Ok(sweep(config.n_list()?, |n| n as f64, |n| {
        let spec = SeriesSpec::new(&f2, &kernel, n);
        let (t_max, t_min) = shannon_points(n);
        let ext = search(&spec, t_max, 1.0, grid)?;
        let (plus, minus) = (spec.eval(t_max)?, spec.eval(t_min)?);
        let bound = shannon_bound(&plan, n);
        let mut r = Record::new(n as f64);
        r.value = Some(ext.max_value);
        r.location = Some(ext.max_location);
        r.normalize(log_normalizer(schedule, n));
        r.bound = Some(bound);
        r.bound_satisfied = Some(plus >= bound && minus <= -bound);
        r.aux = Some(shannon_intermediate(&f1, n));
        Ok(r)
    }))
}

fn oversampling(config: &ExperimentConfig) -> Result<Rows> {
    let schedule = config.schedule()?;
    let plan = plan(config)?;
    let a = config.factor()?;
    let f = adversarial_oversampling(&plan, a, oversampling_support(&plan, a))?;
    let slack = lattice_slack(a)?;
    let grid = config.grid.unwrap_or_default();
    let (cauchy, hphi) = (Kernel::Cauchy, Kernel::hilbert_trapezoid(a)?);
    let sup = f.sample(0);
    Ok(sweep(config.n_list()?, |n| n as f64, |n| {
        let t = (n as f64 + 1.0) / a;
        let direct = SeriesSpec::new(&f, &cauchy, n);
        let (plus, minus) = (direct.eval(t)?, direct.eval(-t)?);
        let series = SeriesSpec::new(&f, &hphi, n);
        let ext = search(&series, t, a, grid)?;
        let bound = oversampling_bound(&plan, a, n);
        let full = a * series.eval(t)? > bound - (a * a + slack) * sup;
        let mut r = Record::new(n as f64);
        r.value = Some(ext.max_value);
        r.location = Some(ext.max_location);
        r.normalize(log_normalizer(schedule, n));
        r.bound = Some(bound);
        r.bound_satisfied = Some(plus >= bound && minus <= -bound && full);
        r.aux = Some(plus);
        Ok(r)
    }))
}

fn remark(config: &ExperimentConfig) -> Result<Rows> {
    let a = config.factor()?;
    let rows = sweep(config.n_list()?, |n| n as f64, |n| {
        let (v, t) = operator_norm_max(n, a)?;
        let mut r = Record::new(n as f64);
        r.value = Some(v);
        r.location = Some(t);
        r.normalize(Some((n as f64).ln()));
        Ok(r)
    });
    let c = rows.iter().filter_map(|(r, _)| r.normalized).fold(0.0, f64::max);
    Ok(rows
        .into_iter()
        .map(|(mut r, ms)| {
            if let (Some(v), Some(norm)) = (r.value, r.normalizer) {
                let ceiling = c * norm;
                r.bound = Some(ceiling);
                r.bound_satisfied = Some(v <= ceiling);
                r.aux = Some((ceiling - v) / ceiling);
            }
            (r, ms)
        })
        .collect())
}

fn build_signal(config: &ExperimentConfig, default: SignalConfig) -> Result<SampledSignal> {
    match config.signal.clone().unwrap_or(default) {
        SignalConfig::UnitImpulse => Ok(SampledSignal::unit_impulse()),
        SignalConfig::FejerSquare { m, truncate } => {
            if m < 2 {
                return Err(Error::Config("g_M needs M ≥ 2 to stay inside [−π, π]".into()));
            }
            SampledSignal::from_fn(1.0, truncate, |t| fejer_square(m, t))
        }
        SignalConfig::NyquistF1 => Ok(adversarial_nyquist(&plan(config)?)),
        SignalConfig::Custom { a, values } => SampledSignal::custom(a, values),
    }
}

fn cesaro(config: &ExperimentConfig) -> Result<Rows> {
    let t = config.time()?;
    let system = config.system();
    let f = build_signal(config, SignalConfig::FejerSquare { m: 2, truncate: 40 })?;
    let reference = system.reference_output(&f.spectrum(), t)?;
    let bound = system.norm() * pw1_norm(&f.spectrum())?;
    Ok(sweep(config.m_list()?, |m| m as f64, |m| {
        let mean = cesaro_mean(&f, &system, m, t)?;
        let mut r = Record::new(m as f64);
        r.value = Some((mean - reference).abs());
        r.location = Some(t);
        r.bound = Some(bound);
        r.bound_satisfied = Some(mean.abs() <= bound);
        r.aux = Some(mean);
        Ok(r)
    }))
}

fn subsequence(config: &ExperimentConfig) -> Result<Rows> {
    let t = config.time()?;
    let system = config.system();
    let n_max = config.n_max.expect("validated");
    let mus = config.mu_schedule.clone().expect("validated");
    let start = Instant::now();
    let f = build_signal(config, SignalConfig::NyquistF1)?;
    let sums = partial_sums(&f, &Kernel::Impulse(system.clone()), t, n_max)?;
    let target = match config.xi {
        Some(xi) => xi,
        None if f.provenance() == crate::signals::Provenance::NyquistF1 => {
            system.reference_output(&NyquistSpectrum::new(&plan(config)?), t)?
        }
        None => system.reference_output(&f.spectrum(), t)?,
    };
    let (found, failure) = match convergent_subsequence(&sums, target, &mus) {
        Ok(r) => (r, None),
        Err(Error::Incomplete { partial, cause }) => (*partial, Some(*cause)),
        Err(e) => return Err(e),
    };
    let ms = start.elapsed().as_secs_f64() * 1e3 / mus.len() as f64;
    Ok(mus
        .iter()
        .enumerate()
        .map(|(j, &mu)| {
            let record = match (found.indices.get(j), &failure) {
                (Some(&i), _) => {
                    let mut r = Record::new(mu);
                    r.value = Some(found.values[j]);
                    r.location = Some(i as f64);
                    r.bound = Some(2.0 * mu);
                    r.aux = Some((found.values[j] - target).abs());
                    r.bound_satisfied = Some((found.values[j] - target).abs() <= 2.0 * mu);
                    r
                }
                (None, Some(cause)) => Record::failed(mu, cause),
                (None, None) => unreachable!("complete results cover the schedule"),
            };
            (record, ms)
        })
        .collect())
}

fn threshold(config: &ExperimentConfig) -> Result<Rows> {
    let plan = plan(config)?;
    let f = adversarial_nyquist(&plan);
    let grid = config.grid.unwrap_or_default();
    let kernel = Kernel::Conjugated;
    let deltas = config.deltas.clone().expect("validated");
    Ok(sweep(&deltas, |d| d, |delta| {
        let n = threshold_cutoff(&f, delta)?;
        let spec = SeriesSpec::new(&f, &kernel, n);
        let t = n as f64 + 1.0;
        let ext = search(&spec, t, 1.0, grid)?;
        let (value, location) =
            if ext.max_value >= -ext.min_value { (ext.max_value, ext.max_location) } else { (-ext.min_value, ext.min_location) };
        let mut identity = true;
        for p in [t, -t, 0.3, location] {
            identity &= threshold_series(&f, delta, &kernel, p)? == truncated_series(&spec, p)?;
        }
        let mut r = Record::new(delta);
        r.value = Some(value);
        r.location = Some(location);
        r.bound_satisfied = Some(identity);
        r.aux = Some(n as f64);
        Ok(r)
    }))
}

/// Fourier coefficients of |t| on [−π, π) up to degree 64.
pub fn triangle_wave() -> PeriodicConfig {
    let mut a = vec![0.0; 65];
    a[0] = PI;
    for k in (1..=64).step_by(2) {
        a[k] = -4.0 / (PI * (k * k) as f64);
    }
    PeriodicConfig { a, b: vec![] }
}

const CONJ_TOL: f64 = 1e-8;

fn periodic(config: &ExperimentConfig) -> Result<Rows> {
    let coeffs = config.periodic.clone().unwrap_or_else(triangle_wave);
    let f = PeriodicSignal::coefficients(coeffs.a, coeffs.b)?;
    let probe: Vec<f64> = (0..256).map(|i| -PI + 2.0 * PI * i as f64 / 256.0).collect();
    let reference: Vec<f64> = probe.iter().map(|&t| f.eval(t)).collect();
    Ok(sweep(config.m_list()?, |m| m as f64, |m| {
        let mut worst = (0.0, 0.0);
        let mut partial = 0.0f64;
        for (&t, &v) in probe.iter().zip(&reference) {
            let e = (fejer_mean_periodic(&f, m, t)? - v).abs();
            if e > worst.0 {
                worst = (e, t);
            }
            partial = partial.max((partial_fourier(&f, m, t)? - v).abs());
        }
        let mut conj = 0.0f64;
        for &t in probe.iter().step_by(32) {
            conj = conj.max((conj_partial_fourier(&f, m, t)? - conj_partial_fourier_quadrature(&f, m, t)?).abs());
        }
        let mut r = Record::new(m as f64);
        r.value = Some(worst.0);
        r.location = Some(worst.1);
        r.bound = Some(CONJ_TOL);
        r.bound_satisfied = Some(conj <= CONJ_TOL);
        r.aux = Some(partial);
        Ok(r)
    }))
}

fn hardy(config: &ExperimentConfig) -> Result<Rows> {
    let (eps, terms) = (config.epsilon.expect("validated"), config.terms.expect("validated"));
    let f = PowerSeriesFn::extremal(eps, terms)?;
    let radii = config.r_list.clone().expect("validated");
    Ok(sweep(&radii, |r| r, |r| {
        let (v, w) = hardy_radial_max(&f, r)?;
        let bound = hardy_lower_bound(eps, terms, r)?;
        let mut rec = Record::new(r);
        rec.value = Some(v);
        rec.location = Some(w);
        rec.bound = Some(bound);
        rec.bound_satisfied = Some(v >= bound);
        rec.aux = Some(radial_max_on_grid(&f, r, RADIAL_GRID)?.0);
        Ok(rec)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> ExperimentReport {
        run_experiment(&ExperimentConfig::from_json(text).unwrap()).unwrap()
    }

    #[test]
    fn thm1_small_example() {
        let r = run(r#"{"experiment":"thm1_conjugated","schedule":{"family":"geometric","ratio":0.5},"K":2,"N_list":[1]}"#);
        let rec = &r.records[0];
        assert!(rec.value.unwrap() >= 0.3001054);
        assert!((rec.aux.unwrap() - 0.3001054).abs() < 1e-6);
        assert!((rec.bound.unwrap() - 0.1811254).abs() < 1e-6);
        assert_eq!(rec.bound_satisfied, Some(true));
        assert!(rec.normalized.is_none());
    }

    #[test]
    fn empty_construction_is_rejected() {
        let c = ExperimentConfig::from_json(r#"{"experiment":"thm3_shannon","schedule":{"family":"log"},"K":0,"N_list":[1]}"#).unwrap();
        assert!(run_experiment(&c).unwrap_err().to_string().contains("empty construction"));
    }

    #[test]
    fn cesaro_unit_sample_is_exact() {
        let r = run(r#"{"experiment":"cesaro","signal":{"kind":"unit_impulse"},"system":{"kind":"hilbert"},"M_list":[1,2,8,32],"t":0.3}"#);
        assert!(r.records.iter().all(|x| x.value.unwrap() < 1e-12));
        assert!(r.all_satisfied());
    }

    #[test]
    fn records_are_sorted_and_deterministic() {
        let text = r#"{"experiment":"thm3_shannon","schedule":{"family":"log"},"K":30,"N_list":[2,4,8,16],"grid":{"mode":"local","radius":2.0}}"#;
        let (a, b) = (run(text), run(text));
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert!(a.records.windows(2).all(|w| w[0].key < w[1].key));
        assert!(a.all_satisfied());
    }

    #[test]
    fn failing_record_carries_error() {
        let r = run(r#"{"experiment":"threshold","schedule":{"family":"log"},"K":4,"deltas":[0.01, 50.0],"grid":{"mode":"candidates"}}"#);
        assert!(r.records[1].error.is_some());
        assert_eq!(r.records[0].bound_satisfied, Some(true));
        assert!(!r.all_satisfied());
    }

    #[test]
    fn hardy_and_periodic_demos() {
        let h = run(r#"{"experiment":"hardy_demo","epsilon":0.25,"terms":500,"r_list":[0.5,0.9,0.99]}"#);
        assert!(h.all_satisfied());
        let p = run(r#"{"experiment":"periodic_demo","M_list":[4,16]}"#);
        assert!(p.all_satisfied());
        assert!(p.records[1].value.unwrap() < p.records[0].value.unwrap());
    }
}
