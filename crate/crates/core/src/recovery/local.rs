use num_complex::Complex64;

use crate::coherence::CoherenceBands;
use crate::numerics::{solve_on_support, ComplexMatrix};
use crate::{Error, Result};

/// Output of one local-optimization sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOptimization {
    /// Optimized support, sorted, same size as the input.
    pub support: Vec<usize>,
    pub residual_norm: f64,
    /// Candidates dropped because their least-squares problem was rank deficient.
    pub skipped_rank_deficient: usize,
}

/// Single forward sweep of band-local swaps.
///
/// For each incumbent `i_n` of `S0`, in ascending order, every `j ∈ B_η(i_n)`
/// not already in the support is tried in place of `i_n` and the swap with the
/// smallest least-squares residual is kept. The incumbent survives ties; among
/// tied challengers the lowest index wins.
pub fn local_optimization(
    a: &ComplexMatrix,
    b: &[Complex64],
    bands: &CoherenceBands,
    s0: &[usize],
) -> Result<LocalOptimization> {
    if s0.is_empty() {
        return Err(Error::InvalidParameter("local optimization needs a nonempty support".into()));
    }
    if bands.len() != a.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "bands cover {} columns, matrix has {}",
            bands.len(),
            a.n_cols()
        )));
    }
    let mut support = s0.to_vec();
    support.sort_unstable();
    support.dedup();
    if support.len() != s0.len() || support.last().is_some_and(|&j| j >= a.n_cols()) {
        return Err(Error::InvalidParameter(format!("invalid support {s0:?}")));
    }

    let incumbents = support.clone();
    let mut current = solve_on_support(a, &support, b)?.residual_norm;
    let mut skipped = 0;
    let mut trial = support.clone();
    for &incumbent in &incumbents {
        let pos = support
            .iter()
            .position(|&k| k == incumbent)
            .expect("incumbents are never displaced before their turn");
        let mut best = (current, incumbent);
        for &j in bands.band(incumbent) {
            if j == incumbent || support.contains(&j) {
                continue;
            }
            trial.copy_from_slice(&support);
            trial[pos] = j;
            let ls = solve_on_support(a, &trial, b)?;
            if ls.rank_deficient {
                skipped += 1;
                continue;
            }
            if ls.residual_norm < best.0 {
                best = (ls.residual_norm, j);
            }
        }
        support[pos] = best.1;
        current = best.0;
    }
    support.sort_unstable();
    Ok(LocalOptimization {
        support,
        residual_norm: current,
        skipped_rank_deficient: skipped,
    })
}
