use super::config::{EnsembleSpec, EtaChoice, ExperimentConfig};
use super::metrics::{relative_signal_error, success};
use crate::coherence::{
    band_assignment, bands, check_separation, coherence_pattern, coherence_row, default_eta,
    theorem1_margin, theorem2_margin, BandAssignment, CoherenceBands,
};
use crate::ensembles::{
    build_dft_frame, build_gaussian_matrix, build_paraxial_matrix, compose, generate_objects,
    synthesize_measurements, Measurements, ParaxialGeometry, SensingMatrix, SparseSignal,
};
use crate::numerics::{ComplexMatrix, RngStream};
use crate::recovery::{recover, Algorithm, PursuitParams, RecoveryResult, Termination};
use crate::{Error, Result};

const MATRIX_STREAM: u64 = 0;
const OBJECT_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;
/// Stream id reserved for automatic η; trial streams use the trial index.
const AUTO_ETA_STREAM: u64 = u64::MAX;
pub const AUTO_ETA_REALIZATIONS: usize = 20;

/// A fresh sensing matrix and, for the frame ensemble, the synthesis operator `Ψ`.
pub fn build_trial_matrix(
    spec: &EnsembleSpec,
    stream: RngStream,
) -> Result<(SensingMatrix, Option<ComplexMatrix>)> {
    let stream = stream.substream(MATRIX_STREAM);
    match *spec {
        EnsembleSpec::Paraxial { n, m, f } => {
            let geometry = ParaxialGeometry::normalized(f, m)?;
            Ok((build_paraxial_matrix(&geometry, n, stream)?, None))
        }
        EnsembleSpec::Frame { n, r, f } => {
            let psi = build_dft_frame(r, f)?;
            let phi = build_gaussian_matrix(n, r, stream)?;
            let a = compose(&phi, &psi)?;
            Ok((a, Some(psi.matrix().clone())))
        }
    }
}

/// Mean coherence `μ(j₀, j₀ + Δ)` for `Δ = 0, 1, …` at `j₀ = M/2`, averaged
/// over `realizations` independent matrices.
pub fn band_profile(spec: &EnsembleSpec, realizations: usize, stream: RngStream) -> Result<Vec<f64>> {
    if realizations == 0 {
        return Err(Error::InvalidParameter("need at least one realization".into()));
    }
    spec.validate()?;
    let m = spec.grid_len();
    let j0 = m / 2;
    let mut sum = vec![0.0; m - j0];
    for r in 0..realizations {
        let (a, _) = build_trial_matrix(spec, stream.substream(r as u64))?;
        let row = coherence_row(a.matrix(), j0)?;
        for (acc, mu) in sum.iter_mut().zip(&row[j0..]) {
            *acc += mu;
        }
    }
    Ok(sum.into_iter().map(|v| v / realizations as f64).collect())
}

/// η for one sweep point: the fixed value, or the largest averaged coherence
/// beyond one Rayleigh length.
pub fn resolve_eta(config: &ExperimentConfig) -> Result<f64> {
    match config.eta {
        EtaChoice::Fixed(eta) => Ok(eta),
        EtaChoice::Auto => {
            let stream = RngStream::new(config.base_seed, AUTO_ETA_STREAM);
            let profile = band_profile(&config.ensemble, AUTO_ETA_REALIZATIONS, stream)?;
            default_eta(&profile, config.ensemble.refinement())
        }
    }
}

/// Hypotheses of the recovery guarantees, evaluated on the coefficients seen
/// by the pursuit (unit-norm columns) with `ε = ‖e‖`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Hypotheses {
    pub separation_ok: bool,
    pub thm1_ok: bool,
    pub thm2_ok: bool,
}

/// Everything an algorithm sees in one trial. All algorithms share it.
#[derive(Clone, Debug)]
pub struct TrialInstance {
    pub trial: usize,
    pub eta: f64,
    pub sensing: SensingMatrix,
    pub synthesis: Option<ComplexMatrix>,
    /// `A` with unit-norm columns; pursuit runs on this.
    pub pursuit_matrix: ComplexMatrix,
    pub column_norms: Vec<f64>,
    pub bands: CoherenceBands,
    pub truth: SparseSignal,
    pub measurements: Measurements,
    pub hypotheses: Hypotheses,
    sparsity: usize,
    tol_grid: usize,
    spec: EnsembleSpec,
}

pub fn generate_trial(config: &ExperimentConfig, eta: f64, trial: usize) -> Result<TrialInstance> {
    config.validate()?;
    let spec = config.ensemble;
    let stream = RngStream::new(config.base_seed, trial as u64);
    let (sensing, synthesis) = build_trial_matrix(&spec, stream)?;
    let bands = bands(&coherence_pattern(&sensing)?, eta)?;

    let a = sensing.matrix();
    let column_norms: Vec<f64> = (0..a.n_cols()).map(|j| a.column_norm(j)).collect();
    if let Some(j) = column_norms.iter().position(|&d| d == 0.0) {
        return Err(Error::ZeroColumn(j));
    }
    let pursuit_matrix = ComplexMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| a.get(i, j) / column_norms[j]);

    let truth = generate_objects(
        spec.grid_len(),
        config.sparsity,
        config.min_separation(),
        config.dynamic_range,
        spec.topology(),
        stream.substream(OBJECT_STREAM),
    )?;
    let measurements = synthesize_measurements(a, &truth, config.relative_noise, stream.substream(NOISE_STREAM))?;

    let scaled: Vec<f64> = truth
        .support()
        .iter()
        .zip(truth.amplitudes())
        .map(|(&j, v)| v.norm() * column_norms[j])
        .collect();
    let z_max = scaled.iter().copied().fold(0.0, f64::max);
    let z_min = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let noise = measurements.e.norm();
    let hypotheses = Hypotheses {
        separation_ok: check_separation(&bands, truth.support()),
        thm1_ok: theorem1_margin(eta, config.sparsity, z_max, z_min, noise)? < 1.0,
        thm2_ok: theorem2_margin(eta, config.sparsity, noise, z_min)?.holds,
    };

    Ok(TrialInstance {
        trial,
        eta,
        sensing,
        synthesis,
        pursuit_matrix,
        column_norms,
        bands,
        truth,
        measurements,
        hypotheses,
        sparsity: config.sparsity,
        tol_grid: spec.refinement(),
        spec,
    })
}

impl TrialInstance {
    /// Runs one algorithm; the estimate is returned in the original coefficients.
    pub fn recover(&self, algorithm: Algorithm) -> Result<(RecoveryResult, SparseSignal)> {
        let mut params = PursuitParams::new(self.sparsity);
        if algorithm.needs_bands() {
            params = params.with_bands(&self.bands);
        }
        let result = recover(algorithm, &self.pursuit_matrix, &self.measurements.b, params)?;
        let pairs = result
            .estimate
            .support()
            .iter()
            .zip(result.estimate.amplitudes())
            .map(|(&j, &z)| (j, z / self.column_norms[j]))
            .collect();
        let estimate = SparseSignal::from_pairs(self.truth.grid_len(), pairs)?;
        Ok((result, estimate))
    }

    pub fn evaluate(&self, algorithm: Algorithm, sweep_value: f64) -> TrialRecord {
        match self.try_evaluate(algorithm, sweep_value) {
            Ok(record) => record,
            Err(e) => TrialRecord::failed(self.trial, sweep_value, algorithm, self.hypotheses, &e),
        }
    }

    fn try_evaluate(&self, algorithm: Algorithm, sweep_value: f64) -> Result<TrialRecord> {
        let (result, estimate) = self.recover(algorithm)?;
        let noise = self.measurements.e.norm();
        Ok(TrialRecord {
            trial: self.trial,
            sweep_value,
            algorithm,
            success: success(
                self.truth.support(),
                estimate.support(),
                self.tol_grid,
                self.spec.topology(),
                self.spec.grid_len(),
            ),
            relative_error: relative_signal_error(self.synthesis.as_ref(), &self.truth, &estimate)?,
            residual_amplification: (noise > 0.0).then(|| result.final_residual_norm() / noise),
            hypotheses: self.hypotheses,
            assignment: Some(band_assignment(&self.bands, self.truth.support(), estimate.support())),
            termination: Some(result.termination),
            error: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub sweep_value: f64,
    pub algorithm: Algorithm,
    pub success: bool,
    /// NaN when the trial failed.
    pub relative_error: f64,
    /// `‖b − Ax̂‖/‖e‖`; absent for noiseless data.
    pub residual_amplification: Option<f64>,
    pub hypotheses: Hypotheses,
    pub assignment: Option<BandAssignment>,
    pub termination: Option<Termination>,
    pub error: Option<String>,
}

impl TrialRecord {
    fn failed(trial: usize, sweep_value: f64, algorithm: Algorithm, hypotheses: Hypotheses, e: &Error) -> Self {
        Self {
            trial,
            sweep_value,
            algorithm,
            success: false,
            relative_error: f64::NAN,
            residual_amplification: None,
            hypotheses,
            assignment: None,
            termination: None,
            error: Some(e.to_string()),
        }
    }

    /// Hypotheses of the relevant guarantee held but its conclusion did not.
    /// OMP carries no guarantee.
    pub fn theorem_violation(&self) -> bool {
        let h = self.hypotheses;
        let Some(assign) = self.assignment else {
            return false;
        };
        match self.algorithm {
            Algorithm::Omp => false,
            Algorithm::Bomp => h.separation_ok && h.thm1_ok && !assign.bomp_conclusion(),
            Algorithm::Bloomp => h.separation_ok && h.thm1_ok && h.thm2_ok && !assign.bloomp_conclusion(),
        }
    }
}

/// One record per requested algorithm, all on identical data. Failures are
/// recorded, never raised.
pub fn run_trial(config: &ExperimentConfig, trial: usize) -> Vec<TrialRecord> {
    let sweep_value = config.sweep_values.first().copied().unwrap_or(f64::NAN);
    run_trial_at(config, trial, sweep_value)
}

pub(crate) fn run_trial_at(config: &ExperimentConfig, trial: usize, sweep_value: f64) -> Vec<TrialRecord> {
    let instance = resolve_eta(config).and_then(|eta| generate_trial(config, eta, trial));
    match instance {
        Ok(inst) => config.algorithms.iter().map(|&alg| inst.evaluate(alg, sweep_value)).collect(),
        Err(e) => config
            .algorithms
            .iter()
            .map(|&alg| TrialRecord::failed(trial, sweep_value, alg, Hypotheses::default(), &e))
            .collect(),
    }
}
