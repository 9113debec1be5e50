//! Configuration-driven sweeps producing CSV tables.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{resolve, validate_config, ResolvedSweep, SweepConfig, ValidationReport};
pub use output::{csv_string, manifest, write_csv};
pub use run::{run_sweep, RunOptions, SweepOutput};
