//! Monte Carlo experiments: configuration, per-trial data and metrics,
//! sweep aggregation and CSV output.
//!
//! A trial is identified by `(base_seed, trial index)`; the matrix, the
//! objects and the noise come from fixed substreams of that pair, so any
//! trial can be replayed on its own and results do not depend on how trials
//! are scheduled across workers.

mod config;
mod experiment;
mod metrics;
mod output;
mod trial;

pub use config::{EnsembleSpec, EtaChoice, ExperimentConfig, SweepParam};
pub use experiment::{run_experiment, summarize, ExperimentOutput, ExperimentSummary, SummaryRow};
pub use metrics::{relative_signal_error, success, wilson_interval, Z95};
pub use output::{
    emit_profile_csv, emit_summary_csv, write_profile, write_records, write_signals, write_summary,
    PROFILE_COLUMNS, RECORD_COLUMNS, SIGNAL_COLUMNS, SUMMARY_COLUMNS,
};
pub use trial::{
    band_profile, build_trial_matrix, generate_trial, resolve_eta, run_trial, Hypotheses,
    TrialInstance, TrialRecord, AUTO_ETA_REALIZATIONS,
};
