use crate::ensembles::{SparseSignal, Topology};
use crate::numerics::ComplexMatrix;
use crate::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Bottleneck success: a perfect matching exists between the two supports
/// using only pairs at grid distance `< tol_grid`.
pub fn success(
    true_support: &[usize],
    est_support: &[usize],
    tol_grid: usize,
    topology: Topology,
    grid_len: usize,
) -> bool {
    if true_support.is_empty() || true_support.len() != est_support.len() {
        return false;
    }
    let adjacency: Vec<Vec<usize>> = est_support
        .iter()
        .map(|&e| {
            (0..true_support.len())
                .filter(|&t| topology.distance(e, true_support[t], grid_len) < tol_grid)
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; true_support.len()];
    (0..est_support.len()).all(|e| {
        let mut seen = vec![false; true_support.len()];
        augment(e, &adjacency, &mut owner, &mut seen)
    })
}

fn augment(e: usize, adjacency: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &t in &adjacency[e] {
        if seen[t] {
            continue;
        }
        seen[t] = true;
        if owner[t].is_none_or(|other| augment(other, adjacency, owner, seen)) {
            owner[t] = Some(e);
            return true;
        }
    }
    false
}

/// `‖Ψ(x̂ − x)‖/‖Ψx‖` when a synthesis operator is given, else `‖x̂ − x‖/‖x‖`.
pub fn relative_signal_error(
    synthesis: Option<&ComplexMatrix>,
    x_true: &SparseSignal,
    x_est: &SparseSignal,
) -> Result<f64> {
    if x_true.grid_len() != x_est.grid_len() {
        return Err(Error::DimensionMismatch(format!(
            "grid lengths {} and {}",
            x_true.grid_len(),
            x_est.grid_len()
        )));
    }
    let mut diff: Vec<_> = x_est
        .support()
        .iter()
        .copied()
        .zip(x_est.amplitudes().iter().copied())
        .collect();
    for (&j, &v) in x_true.support().iter().zip(x_true.amplitudes()) {
        match diff.iter_mut().find(|(k, _)| *k == j) {
            Some(entry) => entry.1 -= v,
            None => diff.push((j, -v)),
        }
    }
    let diff = SparseSignal::from_pairs(x_true.grid_len(), diff)?;
    let (num, den) = match synthesis {
        Some(psi) => (diff.apply(psi)?.norm(), x_true.apply(psi)?.norm()),
        None => (diff.norm(), x_true.norm()),
    };
    if den == 0.0 {
        return Err(Error::InvalidParameter("relative error of a zero signal".into()));
    }
    Ok(num / den)
}

/// Wilson score 95% interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
