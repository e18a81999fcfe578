//! Configuration-driven runs: single scenarios, figure presets and
//! one-parameter sweeps, with CSV and JSON emission.

mod config;
mod presets;
mod run;
mod sweep;

pub use config::{
    Amplitude, BellState, BuiltState, CaseStudySpec, Grid, Output, ScenarioConfig, StateSpec, NORM_EXACT,
    NORM_REPAIRABLE,
};
pub use presets::{preset_configs, run_preset, PresetReport, PRESETS};
pub use run::{run_scenario, RunReport, Series};
pub use sweep::{sweep, sweep_to_csv, Axis, SweepRow};
