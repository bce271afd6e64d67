use rayon::prelude::*;

use super::config::{EtaChoice, ExperimentConfig, SweepParam};
use super::metrics::wilson_interval;
use super::trial::{resolve_eta, run_trial_at, TrialRecord};
use crate::recovery::Algorithm;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub sweep_value: f64,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub rate_lo95: f64,
    pub rate_hi95: f64,
    /// Over trials that ran; NaN if none did.
    pub mean_rel_err: f64,
    pub std_rel_err: f64,
    pub mean_residual_amp: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub sweep_param: SweepParam,
    pub rows: Vec<SummaryRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub summary: ExperimentSummary,
    /// Ordered by sweep value, then trial, then algorithm as configured.
    pub records: Vec<TrialRecord>,
    /// `(sweep value, η)` actually used.
    pub resolved_eta: Vec<(f64, f64)>,
}

/// Runs every `(sweep value, trial)` pair on a pool of `workers` threads.
/// Output is independent of `workers`.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentOutput> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;

    let mut points = Vec::with_capacity(config.sweep_values.len());
    for &value in &config.sweep_values {
        let mut point = config.at(value)?;
        let eta = pool.install(|| resolve_eta(&point))?;
        point.eta = EtaChoice::Fixed(eta);
        points.push((value, point));
    }

    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..config.trials).map(move |t| (p, t)))
        .collect();
    let per_trial: Vec<Vec<TrialRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, t)| run_trial_at(&points[p].1, t, points[p].0))
            .collect()
    });
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();

    let resolved_eta = points
        .iter()
        .map(|(v, c)| match c.eta {
            EtaChoice::Fixed(eta) => (*v, eta),
            EtaChoice::Auto => unreachable!("resolved above"),
        })
        .collect();
    Ok(ExperimentOutput {
        summary: summarize(config.sweep_param, &config.sweep_values, &config.algorithms, &records),
        records,
        resolved_eta,
    })
}

/// Aggregates records into one row per `(sweep value, algorithm)`, in the given order.
pub fn summarize(
    sweep_param: SweepParam,
    sweep_values: &[f64],
    algorithms: &[Algorithm],
    records: &[TrialRecord],
) -> ExperimentSummary {
    let mut rows = Vec::with_capacity(sweep_values.len() * algorithms.len());
    for &value in sweep_values {
        for &algorithm in algorithms {
            let group: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.algorithm == algorithm && r.sweep_value.to_bits() == value.to_bits())
                .collect();
            rows.push(summary_row(value, algorithm, &group));
        }
    }
    ExperimentSummary { sweep_param, rows }
}

fn summary_row(sweep_value: f64, algorithm: Algorithm, group: &[&TrialRecord]) -> SummaryRow {
    let trials = group.len();
    let successes = group.iter().filter(|r| r.success).count();
    let (rate_lo95, rate_hi95) = wilson_interval(successes, trials);
    let errors: Vec<f64> = group
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| r.relative_error)
        .collect();
    let (mean_rel_err, std_rel_err) = mean_std(&errors);
    let amps: Vec<f64> = group.iter().filter_map(|r| r.residual_amplification).collect();
    SummaryRow {
        sweep_value,
        algorithm,
        trials,
        successes,
        success_rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
        rate_lo95,
        rate_hi95,
        mean_rel_err,
        std_rel_err,
        mean_residual_amp: (!amps.is_empty()).then(|| mean_std(&amps).0),
    }
}

/// Mean and sample standard deviation; the deviation of one value is 0.
fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::EnsembleSpec;

    fn config(trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            ensemble: EnsembleSpec::Paraxial { n: 40, m: 120, f: 3 },
            sparsity: 3,
            separation_rl: 3.0,
            dynamic_range: 2.0,
            relative_noise: 0.01,
            algorithms: vec![Algorithm::Bloomp, Algorithm::Omp],
            eta: EtaChoice::Fixed(0.45),
            trials,
            base_seed: 3,
            sweep_param: SweepParam::N,
            sweep_values: vec![30.0, 40.0],
        }
    }

    #[test]
    fn summary_matches_recount() {
        let out = run_experiment(&config(6), 1).unwrap();
        assert_eq!(out.records.len(), 2 * 6 * 2);
        assert_eq!(out.summary.rows.len(), 4);
        assert_eq!(out.resolved_eta, vec![(30.0, 0.45), (40.0, 0.45)]);
        for row in &out.summary.rows {
            let recount = out
                .records
                .iter()
                .filter(|r| r.algorithm == row.algorithm && r.sweep_value == row.sweep_value && r.success)
                .count();
            assert_eq!(row.successes, recount);
            assert_eq!(row.trials, 6);
            assert_eq!(row.success_rate, recount as f64 / 6.0);
            assert!(row.rate_lo95 <= row.success_rate && row.success_rate <= row.rate_hi95);
            assert!(row.mean_residual_amp.is_some());
        }
        let order: Vec<_> = out.summary.rows.iter().map(|r| (r.sweep_value, r.algorithm)).collect();
        assert_eq!(
            order,
            vec![(30.0, Algorithm::Bloomp), (30.0, Algorithm::Omp), (40.0, Algorithm::Bloomp), (40.0, Algorithm::Omp)]
        );
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let c = config(5);
        assert_eq!(run_experiment(&c, 1).unwrap(), run_experiment(&c, 3).unwrap());
    }

    #[test]
    fn doubling_trials_keeps_prefix() {
        let short = run_experiment(&config(3), 1).unwrap();
        let long = run_experiment(&config(6), 1).unwrap();
        for value in [30.0, 40.0] {
            let pick = |o: &ExperimentOutput| -> Vec<TrialRecord> {
                o.records.iter().filter(|r| r.sweep_value == value && r.trial < 3).cloned().collect()
            };
            assert_eq!(pick(&short), pick(&long));
        }
    }

    #[test]
    fn single_trial_summary_is_the_record() {
        let mut c = config(1);
        c.sweep_values = vec![40.0];
        let out = run_experiment(&c, 1).unwrap();
        for (row, rec) in out.summary.rows.iter().zip(&out.records) {
            assert_eq!(row.successes, rec.success as usize);
            assert_eq!(row.mean_rel_err, rec.relative_error);
            assert_eq!(row.std_rel_err, 0.0);
            assert_eq!(row.mean_residual_amp, rec.residual_amplification);
        }
    }

    #[test]
    fn mean_std_reference() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(mean_std(&[]).0.is_nan());
    }
}
