use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;

use crate::numerics::{complex_normal, ComplexMatrix, ComplexVector, RngStream};
use crate::{Error, Result};

/// Sparse vector on a grid of length `M`: sorted support plus one nonzero amplitude per index.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSignal {
    grid_len: usize,
    support: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl SparseSignal {
    pub fn new(grid_len: usize, support: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if support.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} support indices, {} amplitudes",
                support.len(),
                amplitudes.len()
            )));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("support must be strictly increasing".into()));
        }
        if let Some(&j) = support.last().filter(|&&j| j >= grid_len) {
            return Err(Error::InvalidParameter(format!(
                "support index {j} outside grid of length {grid_len}"
            )));
        }
        if amplitudes
            .iter()
            .any(|a| !(a.re.is_finite() && a.im.is_finite()) || a.norm() == 0.0)
        {
            return Err(Error::InvalidParameter("amplitudes must be finite and nonzero".into()));
        }
        Ok(Self {
            grid_len,
            support,
            amplitudes,
        })
    }

    /// Builds from unordered `(index, amplitude)` pairs, dropping exact zeros.
    pub fn from_pairs(grid_len: usize, mut pairs: Vec<(usize, Complex64)>) -> Result<Self> {
        pairs.retain(|(_, a)| a.norm() != 0.0);
        pairs.sort_by_key(|&(j, _)| j);
        let (support, amplitudes) = pairs.into_iter().unzip();
        Self::new(grid_len, support, amplitudes)
    }

    pub fn zero(grid_len: usize) -> Self {
        Self {
            grid_len,
            support: Vec::new(),
            amplitudes: Vec::new(),
        }
    }

    pub fn grid_len(&self) -> usize {
        self.grid_len
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn x_max(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn x_min(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.grid_len];
        for (&j, &a) in self.support.iter().zip(&self.amplitudes) {
            x[j] = a;
        }
        x
    }

    /// `A x`, touching only the support columns.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexVector> {
        if a.n_cols() != self.grid_len {
            return Err(Error::DimensionMismatch(format!(
                "signal of length {} against {} columns",
                self.grid_len,
                a.n_cols()
            )));
        }
        Ok(a.combine_columns(&self.support, &self.amplitudes))
    }
}

/// How index distance is measured on the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    /// `|i − j|` (imaging grid).
    Linear,
    /// `min(|i − j|, M − |i − j|)` (DFT frame, whose columns wrap around).
    Cyclic,
}

impl Topology {
    pub fn distance(self, i: usize, j: usize, grid_len: usize) -> usize {
        let d = i.abs_diff(j);
        match self {
            Topology::Linear => d,
            Topology::Cyclic => d.min(grid_len - d),
        }
    }
}

const MAX_CYCLIC_ATTEMPTS: usize = 100_000;

/// Random `s`-sparse object with pairwise index gaps of at least `min_sep`.
///
/// Support is uniform over all admissible placements. Magnitudes are uniform
/// on `[1, DR]` with one entry pinned to `DR` and another to `1`, so the
/// dynamic range is exactly `DR`. Phases are uniform on `[0, 2π)`.
pub fn generate_objects(
    grid_len: usize,
    sparsity: usize,
    min_sep: usize,
    dynamic_range: f64,
    topology: Topology,
    stream: RngStream,
) -> Result<SparseSignal> {
    if sparsity == 0 || min_sep == 0 {
        return Err(Error::InvalidParameter(
            "sparsity and separation must be positive".into(),
        ));
    }
    if !(dynamic_range.is_finite() && dynamic_range >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "dynamic range must be >= 1, got {dynamic_range}"
        )));
    }
    if dynamic_range > 1.0 && sparsity < 2 {
        return Err(Error::InvalidParameter(
            "dynamic range above 1 needs at least two objects".into(),
        ));
    }
    if sparsity.saturating_mul(min_sep) >= grid_len {
        return Err(Error::InfeasibleSeparation(format!(
            "{sparsity} objects {min_sep} apart do not fit in {grid_len} grid points"
        )));
    }
    let mut rng = stream.rng();

    // Gaps ≥ min_sep on a line are in bijection with s-subsets of
    // M − (s−1)(min_sep−1) slots: shift the k-th sorted pick by k·(min_sep−1).
    let slots = grid_len - (sparsity - 1) * (min_sep - 1);
    let mut support = Vec::new();
    for attempt in 0.. {
        let mut picks = index::sample(&mut rng, slots, sparsity).into_vec();
        picks.sort_unstable();
        support = picks
            .into_iter()
            .enumerate()
            .map(|(k, p)| p + k * (min_sep - 1))
            .collect::<Vec<_>>();
        let wrap_ok = match topology {
            Topology::Linear => true,
            Topology::Cyclic => {
                sparsity == 1 || grid_len - support[sparsity - 1] + support[0] >= min_sep
            }
        };
        if wrap_ok {
            break;
        }
        if attempt + 1 >= MAX_CYCLIC_ATTEMPTS {
            return Err(Error::InfeasibleSeparation(format!(
                "no cyclic placement found after {MAX_CYCLIC_ATTEMPTS} draws"
            )));
        }
    }

    let mut magnitudes: Vec<f64> = (0..sparsity)
        .map(|_| {
            if dynamic_range > 1.0 {
                rng.gen_range(1.0..=dynamic_range)
            } else {
                1.0
            }
        })
        .collect();
    if dynamic_range > 1.0 {
        let pinned = index::sample(&mut rng, sparsity, 2);
        magnitudes[pinned.index(0)] = dynamic_range;
        magnitudes[pinned.index(1)] = 1.0;
    }
    let amplitudes = magnitudes
        .into_iter()
        .map(|m| Complex64::from_polar(m, rng.gen_range(0.0..2.0 * PI)))
        .collect();
    SparseSignal::new(grid_len, support, amplitudes)
}

/// Noisy data `b = Ax + e` together with the noise that was added.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurements {
    pub b: ComplexVector,
    pub e: ComplexVector,
}

/// Draws circular Gaussian noise rescaled so that `‖e‖ = ρ·‖Ax‖` exactly.
pub fn synthesize_measurements(
    a: &ComplexMatrix,
    x: &SparseSignal,
    relative_noise: f64,
    stream: RngStream,
) -> Result<Measurements> {
    if !(relative_noise.is_finite() && relative_noise >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "relative noise must be >= 0, got {relative_noise}"
        )));
    }
    let clean = x.apply(a)?;
    let target = relative_noise * clean.norm();
    let e = if target == 0.0 {
        ComplexVector::zeros(a.n_rows())
    } else {
        let mut rng = stream.rng();
        let raw: Vec<Complex64> = (0..a.n_rows()).map(|_| complex_normal(&mut rng)).collect();
        let raw_norm = crate::numerics::norm(&raw);
        ComplexVector::new(raw.into_iter().map(|z| z * (target / raw_norm)).collect())?
    };
    let b = ComplexVector::new(clean.iter().zip(e.iter()).map(|(c, n)| c + n).collect())?;
    Ok(Measurements { b, e })
}
