use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::local_optimization;
use crate::coherence::CoherenceBands;
use crate::ensembles::SparseSignal;
use crate::numerics::{correlations, norm, solve_on_support, ComplexMatrix};
use crate::{Error, Result};

/// Relative residual at which pursuit stops before reaching `s` picks.
pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Omp,
    Bomp,
    Bloomp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Omp, Algorithm::Bomp, Algorithm::Bloomp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Omp => "omp",
            Algorithm::Bomp => "bomp",
            Algorithm::Bloomp => "bloomp",
        }
    }

    pub fn needs_bands(self) -> bool {
        !matches!(self, Algorithm::Omp)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "omp" => Ok(Algorithm::Omp),
            "bomp" => Ok(Algorithm::Bomp),
            "bloomp" => Ok(Algorithm::Bloomp),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Termination {
    Completed,
    CandidateSetExhausted,
    RankDeficientLs,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::CandidateSetExhausted => "candidate_set_exhausted",
            Termination::RankDeficientLs => "rank_deficient_ls",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PursuitParams<'a> {
    pub sparsity: usize,
    pub bands: Option<&'a CoherenceBands>,
    /// Stop once `‖r‖ ≤ residual_tolerance·‖b‖`.
    pub residual_tolerance: f64,
}

impl<'a> PursuitParams<'a> {
    pub fn new(sparsity: usize) -> Self {
        Self {
            sparsity,
            bands: None,
            residual_tolerance: DEFAULT_RESIDUAL_TOLERANCE,
        }
    }

    pub fn with_bands(mut self, bands: &'a CoherenceBands) -> Self {
        self.bands = Some(bands);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult {
    pub estimate: SparseSignal,
    /// `S⁰ = ∅, S¹, …`, each sorted.
    pub support_history: Vec<Vec<usize>>,
    /// `‖r⁰‖ = ‖b‖, ‖r¹‖, …`, aligned with `support_history`.
    pub residual_norms: Vec<f64>,
    pub termination: Termination,
}

impl RecoveryResult {
    pub fn final_residual_norm(&self) -> f64 {
        *self.residual_norms.last().expect("history starts with ‖b‖")
    }
}

pub fn omp(a: &ComplexMatrix, b: &[Complex64], params: PursuitParams<'_>) -> Result<RecoveryResult> {
    pursue(Algorithm::Omp, a, b, params)
}

/// Band-excluded OMP: at step `n` the pick avoids `B_η⁽²⁾(S^{n−1})`.
pub fn bomp(a: &ComplexMatrix, b: &[Complex64], params: PursuitParams<'_>) -> Result<RecoveryResult> {
    pursue(Algorithm::Bomp, a, b, params)
}

/// BOMP with a local-optimization sweep over the augmented support at every step.
pub fn bloomp(
    a: &ComplexMatrix,
    b: &[Complex64],
    params: PursuitParams<'_>,
) -> Result<RecoveryResult> {
    pursue(Algorithm::Bloomp, a, b, params)
}

pub fn recover(
    algorithm: Algorithm,
    a: &ComplexMatrix,
    b: &[Complex64],
    params: PursuitParams<'_>,
) -> Result<RecoveryResult> {
    pursue(algorithm, a, b, params)
}

fn validate(
    algorithm: Algorithm,
    a: &ComplexMatrix,
    b: &[Complex64],
    params: &PursuitParams<'_>,
) -> Result<()> {
    if b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "data length {} against {} rows",
            b.len(),
            a.n_rows()
        )));
    }
    if params.sparsity == 0 || params.sparsity > a.n_rows() {
        return Err(Error::InvalidParameter(format!(
            "sparsity {} must lie in 1..={}",
            params.sparsity,
            a.n_rows()
        )));
    }
    if !(params.residual_tolerance >= 0.0) {
        return Err(Error::InvalidParameter("residual tolerance must be >= 0".into()));
    }
    match params.bands {
        Some(bands) if bands.len() != a.n_cols() => Err(Error::DimensionMismatch(format!(
            "bands cover {} columns, matrix has {}",
            bands.len(),
            a.n_cols()
        ))),
        None if algorithm.needs_bands() => Err(Error::InvalidParameter(format!(
            "{algorithm} needs coherence bands"
        ))),
        _ => Ok(()),
    }
}

fn pursue(
    algorithm: Algorithm,
    a: &ComplexMatrix,
    b: &[Complex64],
    params: PursuitParams<'_>,
) -> Result<RecoveryResult> {
    validate(algorithm, a, b, &params)?;
    let b_norm = norm(b);
    let stop_at = params.residual_tolerance * b_norm;

    let mut support: Vec<usize> = Vec::new();
    let mut coef: Vec<Complex64> = Vec::new();
    let mut residual = b.to_vec();
    let mut residual_norm = b_norm;
    let mut support_history = vec![Vec::new()];
    let mut residual_norms = vec![b_norm];
    let mut termination = Termination::Completed;

    for _ in 0..params.sparsity {
        if residual_norm <= stop_at {
            break;
        }
        let corr = correlations(a, &residual)?;
        let excluded = match (algorithm, params.bands) {
            (Algorithm::Omp, _) | (_, None) => {
                let mut mask = vec![false; a.n_cols()];
                for &k in &support {
                    mask[k] = true;
                }
                mask
            }
            (_, Some(bands)) => bands.secondary_mask(&support),
        };
        let mut pick: Option<(usize, f64)> = None;
        for (i, c) in corr.iter().enumerate() {
            if excluded[i] {
                continue;
            }
            let v = c.norm_sqr();
            if pick.is_none_or(|(_, best)| v > best) {
                pick = Some((i, v));
            }
        }
        let Some((i_max, _)) = pick else {
            termination = Termination::CandidateSetExhausted;
            break;
        };

        let mut next = support.clone();
        next.push(i_max);
        next.sort_unstable();
        if let (Algorithm::Bloomp, Some(bands)) = (algorithm, params.bands) {
            next = local_optimization(a, b, bands, &next)?.support;
        }
        let ls = solve_on_support(a, &next, b)?;
        if ls.rank_deficient {
            termination = Termination::RankDeficientLs;
            break;
        }
        let fitted = a.combine_columns(&next, &ls.solution);
        residual = b.iter().zip(fitted.iter()).map(|(x, y)| x - y).collect();
        residual_norm = ls.residual_norm;
        coef = ls.solution.into_inner();
        support = next;
        support_history.push(support.clone());
        residual_norms.push(residual_norm);
    }

    let estimate = SparseSignal::from_pairs(a.n_cols(), support.into_iter().zip(coef).collect())?;
    Ok(RecoveryResult {
        estimate,
        support_history,
        residual_norms,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{bands, coherence_pattern_direct};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orthonormal_matrix_exact_recovery() {
        let a = ComplexMatrix::identity(6);
        let b = [c(0.0, 0.0), c(2.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
        let p = coherence_pattern_direct(&a).unwrap();
        let bd = bands(&p, 0.5).unwrap();
        let want = omp(&a, &b, PursuitParams::new(2)).unwrap();
        assert_eq!(want.estimate.support(), &[1, 4]);
        assert!((want.estimate.amplitudes()[0] - c(2.0, 1.0)).norm() < 1e-15);
        for alg in [Algorithm::Bomp, Algorithm::Bloomp] {
            let got = recover(alg, &a, &b, PursuitParams::new(2).with_bands(&bd)).unwrap();
            assert_eq!(got.estimate, want.estimate, "{alg}");
            assert_eq!(got.support_history, want.support_history);
        }
    }

    /// Columns 0 and 1 are nearly parallel; column 2 is orthogonal to both.
    fn band_mates() -> ComplexMatrix {
        let t = 0.2f64;
        ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(t.cos(), 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(t.sin(), 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn band_exclusion_skips_band_mate() {
        let a = band_mates();
        // b = a_0 + a_1; columns 0 and 1 tie on the first pick, lowest index wins.
        let b = a.combine_columns(&[0, 1], &[c(1.0, 0.0), c(1.0, 0.0)]);
        let bd = bands(&coherence_pattern_direct(&a).unwrap(), 0.9).unwrap();
        assert_eq!(bd.secondary_band(&[0]), vec![0, 1]);

        let o = omp(&a, &b, PursuitParams::new(2)).unwrap();
        assert_eq!(o.support_history, vec![vec![], vec![0], vec![0, 1]]);
        assert!(o.final_residual_norm() < 1e-12);

        let bo = bomp(&a, &b, PursuitParams::new(2).with_bands(&bd)).unwrap();
        assert_eq!(bo.support_history, vec![vec![], vec![0], vec![0, 2]]);
        assert!((bo.final_residual_norm() - 0.2f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn exhaustion_is_tagged() {
        let a = band_mates();
        let bd = bands(&coherence_pattern_direct(&a).unwrap(), 0.9).unwrap();
        let b = a.combine_columns(&[0, 1, 2], &[c(1.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]);
        // Picks 0 then 2; afterwards every column is in B⁽²⁾({0, 2}).
        let r = bomp(&a, &b, PursuitParams::new(3).with_bands(&bd)).unwrap();
        assert_eq!(r.termination, Termination::CandidateSetExhausted);
        assert_eq!(r.estimate.support(), &[0, 2]);
    }

    #[test]
    fn zero_data_stops_immediately() {
        let a = ComplexMatrix::identity(3);
        let r = omp(&a, &[c(0.0, 0.0); 3], PursuitParams::new(2)).unwrap();
        assert_eq!(r.estimate.sparsity(), 0);
        assert_eq!(r.termination, Termination::Completed);
        assert_eq!(r.residual_norms, vec![0.0]);
    }

    #[test]
    fn parameter_validation() {
        let a = ComplexMatrix::identity(3);
        let b = [c(1.0, 0.0); 3];
        assert!(bomp(&a, &b, PursuitParams::new(1)).is_err());
        assert!(omp(&a, &b, PursuitParams::new(0)).is_err());
        assert!(omp(&a, &b, PursuitParams::new(4)).is_err());
        assert!(omp(&a, &b[..2], PursuitParams::new(1)).is_err());
        assert_eq!("BLOOMP".parse::<Algorithm>().unwrap(), Algorithm::Bloomp);
        assert!("lasso".parse::<Algorithm>().is_err());
    }
}
