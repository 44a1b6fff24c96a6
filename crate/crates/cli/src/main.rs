use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;
use pwlab::lab::{emit, run_experiment, ExperimentConfig, ExperimentKind, Format};

/// Run one divergence experiment and write its table.
#[derive(Debug, Parser)]
#[command(name = "pwlab", version)]
struct Args {
    /// Experiment name, e.g. thm1_conjugated.
    experiment: ExperimentKind,
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output path; defaults to the config's output entry, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Oversampling factor.
    #[arg(long)]
    a: Option<f64>,
    /// Truncation depth of the construction.
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Evaluation time.
    #[arg(long)]
    t: Option<f64>,
}

fn run(args: Args) -> anyhow::Result<bool> {
    let mut config = ExperimentConfig::load(&args.config)?;
    match config.experiment {
        Some(kind) if kind != args.experiment => {
            bail!("{} configures {kind}, not {}", args.config.display(), args.experiment)
        }
        _ => config.experiment = Some(args.experiment),
    }
    config.a = args.a.or(config.a);
    config.k = args.k.or(config.k);
    config.sigma = args.sigma.or(config.sigma);
    config.t = args.t.or(config.t);

    let report = run_experiment(&config)?;
    let configured = config.output.as_ref();
    let format = args.format.or(configured.map(|o| o.format)).unwrap_or(Format::Csv);
    match args.out.or_else(|| configured.map(|o| o.path.clone())) {
        Some(path) => emit(&report, format, &path)?,
        None => std::io::stdout()
            .write_all(report.render(format)?.as_bytes())
            .context("writing to stdout")?,
    }
    for r in report.violations() {
        eprintln!("violation at {} = {}: {}", report.key_name, r.key, r.error.as_deref().unwrap_or("bound not satisfied"));
    }
    Ok(report.all_satisfied())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
