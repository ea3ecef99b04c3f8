//! Monte-Carlo experiments: configs, the replication runner, regret tables
//! and output files.
//!
//! Within a replication the genie and every policy see the same channel
//! draws (common random numbers), and regret is accumulated path-wise as
//! `sum(a_policy - a_genie)`.

mod config;
mod output;
mod runner;
mod table;

pub use config::{
    DEFAULT_HORIZON, DEFAULT_SEED, ExperimentConfig, Preset, SETTING_IDS, builtin_setting, equally_spaced,
};
pub use output::{
    CURVE_HEADER, Manifest, OutputEntry, OutputFiles, curves_csv, file_stem, git_blob_hash, write_curves_csv,
    write_outputs,
};
pub use runner::{CURVE_POINTS, ExperimentResult, PolicySummary, RegretCurve, record_times, run_experiment};
pub use table::{RegretTable, TableCell, final_regret_table};
