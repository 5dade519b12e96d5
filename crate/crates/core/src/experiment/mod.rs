//! Config-driven sweeps: TOML configuration, per-seed bound evaluation,
//! `results.csv` rows, the run manifest and seed-median summaries.

pub mod config;
pub mod results;
pub mod sweep;

pub use config::{parse_seed_list, ExperimentConfig};
pub use results::{read_csv, write_csv, Metric, ResultRow, Spread, COLUMNS, SCHEMA_VERSION};
pub use sweep::{fig2d_sweep, run_sweep, run_sweep_with_threads, SweepOutput, TOOL_VERSION};
