use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::experiment::ExperimentSummary;
use super::trial::TrialRecord;
use crate::ensembles::SparseSignal;
use crate::Result;

pub const SUMMARY_COLUMNS: [&str; 11] = [
    "sweep_param",
    "sweep_value",
    "algorithm",
    "trials",
    "successes",
    "success_rate",
    "rate_lo95",
    "rate_hi95",
    "mean_rel_err",
    "std_rel_err",
    "mean_residual_amp",
];

pub const PROFILE_COLUMNS: [&str; 2] = ["delta", "mean_mu"];

pub const RECORD_COLUMNS: [&str; 12] = [
    "sweep_value",
    "trial",
    "algorithm",
    "success",
    "relative_error",
    "residual_amp",
    "separation_ok",
    "thm1_ok",
    "thm2_ok",
    "conclusion_holds",
    "termination",
    "error",
];

pub const SIGNAL_COLUMNS: [&str; 4] = ["role", "index", "amplitude_re", "amplitude_im"];

// Floats use `Display`: shortest round-trip form, '.' separator, no locale.
fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_summary<W: Write>(summary: &ExperimentSummary, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_COLUMNS)?;
    for r in &summary.rows {
        w.write_record([
            summary.sweep_param.name().to_string(),
            r.sweep_value.to_string(),
            r.algorithm.name().to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            r.success_rate.to_string(),
            r.rate_lo95.to_string(),
            r.rate_hi95.to_string(),
            r.mean_rel_err.to_string(),
            r.std_rel_err.to_string(),
            opt(r.mean_residual_amp),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile<W: Write>(profile: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROFILE_COLUMNS)?;
    for (delta, mu) in profile.iter().enumerate() {
        w.write_record([delta.to_string(), mu.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_COLUMNS)?;
    for r in records {
        let conclusion = r.assignment.map(|a| match r.algorithm {
            crate::recovery::Algorithm::Bloomp => a.bloomp_conclusion(),
            _ => a.bomp_conclusion(),
        });
        w.write_record([
            r.sweep_value.to_string(),
            r.trial.to_string(),
            r.algorithm.name().to_string(),
            r.success.to_string(),
            r.relative_error.to_string(),
            opt(r.residual_amplification),
            r.hypotheses.separation_ok.to_string(),
            r.hypotheses.thm1_ok.to_string(),
            r.hypotheses.thm2_ok.to_string(),
            conclusion.map(|c| c.to_string()).unwrap_or_default(),
            r.termination.map(|t| t.name().to_string()).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `true,j,re,im` for the ground truth followed by `estimate,j,re,im`.
pub fn write_signals<W: Write>(truth: &SparseSignal, estimate: &SparseSignal, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIGNAL_COLUMNS)?;
    for (role, x) in [("true", truth), ("estimate", estimate)] {
        for (j, v) in x.support().iter().zip(x.amplitudes()) {
            w.write_record([role.to_string(), j.to_string(), v.re.to_string(), v.im.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_summary_csv(summary: &ExperimentSummary, path: &Path) -> Result<()> {
    write_summary(summary, File::create(path)?)
}

pub fn emit_profile_csv(profile: &[f64], path: &Path) -> Result<()> {
    write_profile(profile, File::create(path)?)
}
