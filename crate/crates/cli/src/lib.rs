//! Batch harness around the `distroute` router: seeded suites, ablations,
//! cost sweeps, JSON records and plain-text tables.

pub mod ablation;
pub mod opts;
pub mod record;
pub mod suite;
pub mod sweep;

pub use ablation::{ablation_configs, ablation_rows, ablation_table, flagged_gmean, AblationRow};
pub use record::{run_one, Device, Run, RunRecord, Timing, Workload};
pub use suite::{gmean, records_table, run_suite, summarize, summary_table, Config, Summary};
pub use sweep::{cost_sweep, sweep_deltas, sweep_table, SweepPoint, DEFAULT_C_TELE};
