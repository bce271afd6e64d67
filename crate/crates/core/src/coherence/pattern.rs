use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::ensembles::{Ensemble, SensingMatrix};
use crate::numerics::{inner, ComplexMatrix};
use crate::{Error, Result};

/// Pairwise normalized column coherences `μ(j,k) = |⟨a_j, a_k⟩| / (‖a_j‖‖a_k‖)`.
///
/// Shift-invariant ensembles keep a single profile instead of the full
/// `M × M` table: the paraxial matrix has `μ(j,k)` depending only on `|j − k|`
/// and the DFT frame only on `(k − j) mod M`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherencePattern {
    n: usize,
    storage: Storage,
}

#[derive(Clone, Debug, PartialEq)]
enum Storage {
    /// Row-major `n × n`, exactly symmetric, unit diagonal.
    Dense(Vec<f64>),
    /// `profile[|j − k|]`.
    Toeplitz(Vec<f64>),
    /// `profile[(k − j) mod n]`, with `profile[d] == profile[n − d]`.
    Circulant(Vec<f64>),
}

impl CoherencePattern {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v[j * self.n + k],
            Storage::Toeplitz(p) => p[j.abs_diff(k)],
            Storage::Circulant(p) => p[(k + self.n - j) % self.n],
        }
    }

    /// Offsets `d ≥ 1` with `μ(j, j ± d) > η` for every `j`, when the pattern is
    /// shift-invariant.
    pub(crate) fn shift_profile(&self) -> Option<(&[f64], bool)> {
        match &self.storage {
            Storage::Dense(_) => None,
            Storage::Toeplitz(p) => Some((p, false)),
            Storage::Circulant(p) => Some((p, true)),
        }
    }

    pub(crate) fn dense_row(&self, j: usize) -> Option<&[f64]> {
        match &self.storage {
            Storage::Dense(v) => Some(&v[j * self.n..(j + 1) * self.n]),
            _ => None,
        }
    }

    /// Row `j` of the pattern as a vector.
    pub fn row(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|k| self.get(j, k)).collect()
    }
}

fn check_columns(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let norms: Vec<f64> = (0..a.n_cols()).map(|j| a.column_norm(j)).collect();
    match norms.iter().position(|&v| v == 0.0) {
        Some(j) => Err(Error::ZeroColumn(j)),
        None => Ok(norms),
    }
}

/// Coherence pattern of a sensing matrix, using its known structure when possible.
pub fn coherence_pattern(a: &SensingMatrix) -> Result<CoherencePattern> {
    let m = a.matrix();
    match a.ensemble() {
        Ensemble::Paraxial { .. } => {
            let norms = check_columns(m)?;
            let first = m.col(0);
            let profile = (0..m.n_cols())
                .map(|d| {
                    if d == 0 {
                        1.0
                    } else {
                        clamp_unit(inner(first, m.col(d)).norm() / (norms[0] * norms[d]))
                    }
                })
                .collect();
            Ok(CoherencePattern {
                n: m.n_cols(),
                storage: Storage::Toeplitz(profile),
            })
        }
        Ensemble::DftFrame { .. } => {
            let norms = check_columns(m)?;
            let n = m.n_cols();
            let first = m.col(0);
            let mut profile = vec![1.0; n];
            for d in 1..=n / 2 {
                let v = clamp_unit(inner(first, m.col(d)).norm() / (norms[0] * norms[d]));
                profile[d] = v;
                profile[n - d] = v;
            }
            Ok(CoherencePattern {
                n,
                storage: Storage::Circulant(profile),
            })
        }
        Ensemble::Composed { inner: frame, .. } => match (frame.as_ref(), a.outer_factor()) {
            (Ensemble::DftFrame { r, refinement }, Some(phi)) => {
                check_columns(m)?;
                Ok(framed_gaussian_pattern(phi, *r, r * refinement))
            }
            _ => coherence_pattern_direct(m),
        },
        _ => coherence_pattern_direct(m),
    }
}

#[inline]
fn clamp_unit(v: f64) -> f64 {
    v.min(1.0)
}

/// Full pattern by direct evaluation of every column pair, `O(N·M²)`.
pub fn coherence_pattern_direct(a: &ComplexMatrix) -> Result<CoherencePattern> {
    let norms = check_columns(a)?;
    let n = a.n_cols();
    let mut values = vec![1.0; n * n];
    for j in 0..n {
        for k in j + 1..n {
            let v = clamp_unit(inner(a.col(j), a.col(k)).norm() / (norms[j] * norms[k]));
            values[j * n + k] = v;
            values[k * n + j] = v;
        }
    }
    Ok(CoherencePattern {
        n,
        storage: Storage::Dense(values),
    })
}

/// `μ(j0, k)` for every `k`, `O(N·M)`.
pub fn coherence_row(a: &ComplexMatrix, j0: usize) -> Result<Vec<f64>> {
    if j0 >= a.n_cols() {
        return Err(Error::InvalidParameter(format!(
            "row {j0} outside {} columns",
            a.n_cols()
        )));
    }
    let norms = check_columns(a)?;
    let pivot = a.col(j0);
    Ok((0..a.n_cols())
        .map(|k| {
            if k == j0 {
                1.0
            } else {
                clamp_unit(inner(pivot, a.col(k)).norm() / (norms[j0] * norms[k]))
            }
        })
        .collect())
}

/// Pattern of `A = ΦΨ` with `Ψ` the `R × M` DFT frame, via two passes of FFTs.
///
/// With `K = Φᵀ·conj(Φ)`, the Gram entries are
/// `⟨a_j, a_k⟩ = (1/R) Σ_a e^{−2πi·aj/M} Σ_b K_ab e^{2πi·bk/M}`:
/// an inverse transform along each row of `K` followed by a forward
/// transform along each column, both zero-padded to length `M`.
fn framed_gaussian_pattern(phi: &ComplexMatrix, r: usize, m: usize) -> CoherencePattern {
    debug_assert_eq!(phi.n_cols(), r);
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(m);
    let backward = planner.plan_fft_inverse(m);

    // hk[k * r + a] = H(a, k)
    let mut hk = vec![Complex64::new(0.0, 0.0); m * r];
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for a in 0..r {
        buf.fill(Complex64::new(0.0, 0.0));
        for (b, slot) in buf.iter_mut().take(r).enumerate() {
            // K_ab = Σ_n Φ_na conj(Φ_nb)
            *slot = inner(phi.col(a), phi.col(b));
        }
        backward.process(&mut buf);
        for (k, &h) in buf.iter().enumerate() {
            hk[k * r + a] = h;
        }
    }

    let mut values = vec![0.0; m * m];
    let mut diag = vec![0.0; m];
    for k in 0..m {
        buf.fill(Complex64::new(0.0, 0.0));
        buf[..r].copy_from_slice(&hk[k * r..(k + 1) * r]);
        forward.process(&mut buf);
        // |Gram(j,k)| = |Gram(k,j)|, so column k fills row k.
        let row = &mut values[k * m..(k + 1) * m];
        for (dst, g) in row.iter_mut().zip(&buf) {
            *dst = g.norm_sqr().sqrt() / r as f64;
        }
        diag[k] = buf[k].re / r as f64;
    }
    let scale: Vec<f64> = diag.iter().map(|d| 1.0 / d.sqrt()).collect();
    // Upper triangle wins; tiles keep the mirrored writes cache-local.
    const TILE: usize = 64;
    for j0 in (0..m).step_by(TILE) {
        for k0 in (j0..m).step_by(TILE) {
            for j in j0..(j0 + TILE).min(m) {
                for k in k0.max(j + 1)..(k0 + TILE).min(m) {
                    let v = clamp_unit(values[j * m + k] * scale[j] * scale[k]);
                    values[j * m + k] = v;
                    values[k * m + j] = v;
                }
            }
        }
        for j in j0..(j0 + TILE).min(m) {
            values[j * m + j] = 1.0;
        }
    }
    CoherencePattern {
        n: m,
        storage: Storage::Dense(values),
    }
}

/// Largest off-diagonal coherence `μ(A)`.
pub fn mutual_coherence(pattern: &CoherencePattern) -> Result<f64> {
    let n = pattern.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "mutual coherence needs at least two columns".into(),
        ));
    }
    Ok(match pattern.shift_profile() {
        Some((p, _)) => p[1..].iter().copied().fold(0.0, f64::max),
        None => (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .map(|(j, k)| pattern.get(j, k))
            .fold(0.0, f64::max),
    })
}
