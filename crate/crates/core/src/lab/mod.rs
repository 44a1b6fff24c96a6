//! Experiment registry: configuration, sweeps and table output.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind, Format, GridConfig, OutputConfig, PeriodicConfig, SignalConfig};
pub use experiments::run_experiment;
pub use report::{emit, ExperimentReport, Record, ReportHeader, COLUMNS, SCHEMA_VERSION};
