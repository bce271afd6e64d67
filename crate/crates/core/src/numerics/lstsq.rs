//! Least squares via Householder QR with column pivoting.
//!
//! Rank is decided by the pivot threshold `1e-12 × (largest column norm)`.
//! Rank-deficient problems get the minimum-norm minimizer through a second,
//! unpivoted QR of the trapezoidal factor (a complete orthogonal
//! decomposition).

use num_complex::Complex64;

use super::matrix::{inner, norm, ComplexMatrix, ComplexVector};
use crate::{Error, Result};

/// Relative pivot threshold for rank detection.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LeastSquares {
    pub solution: ComplexVector,
    /// `‖b − A z‖₂`, recomputed from the original matrix.
    pub residual_norm: f64,
    pub rank: usize,
    pub rank_deficient: bool,
}

/// Householder reflector `H = I − τ v vᴴ` acting on rows `offset..`.
struct Reflector {
    offset: usize,
    v: Vec<Complex64>,
    tau: f64,
}

impl Reflector {
    /// Reflector mapping `x` onto `−phase(x₀)·‖x‖·e₁`. Returns `None` for a zero vector.
    fn annihilating(x: &[Complex64], offset: usize) -> Option<(Self, Complex64)> {
        let alpha = norm(x);
        if alpha == 0.0 {
            return None;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.to_vec();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Some((
            Self {
                offset,
                v,
                tau: 2.0 / vnorm2,
            },
            -phase * alpha,
        ))
    }

    fn apply(&self, y: &mut [Complex64]) {
        let seg = &mut y[self.offset..];
        // w = vᴴ y
        let w = inner(seg, &self.v);
        let scale = w * self.tau;
        for (yi, vi) in seg.iter_mut().zip(&self.v) {
            *yi -= vi * scale;
        }
    }
}

/// Least-squares solution of `min_z ‖A z − b‖₂`.
///
/// Requires `A.n_rows() == b.len()` and `A.n_cols() ≤ A.n_rows()`.
pub fn solve_least_squares(a: &ComplexMatrix, b: &[Complex64]) -> Result<LeastSquares> {
    let (m, n) = (a.n_rows(), a.n_cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side length {} against {m} rows",
            b.len()
        )));
    }
    if n > m {
        return Err(Error::DimensionMismatch(format!(
            "least squares needs n_cols <= n_rows, got {m}x{n}"
        )));
    }
    let (z, rank) = if n == 0 {
        (Vec::new(), 0)
    } else {
        pivoted_qr_solve(a, b)
    };
    let solution = ComplexVector::new(z)?;
    let fitted = a.mul_vec(&solution)?;
    let residual_norm = b
        .iter()
        .zip(fitted.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(LeastSquares {
        rank_deficient: rank < n,
        solution,
        residual_norm,
        rank,
    })
}

/// Least squares restricted to the listed columns of `a`.
///
/// The solution is ordered like `support`. An empty support yields an empty
/// solution and residual `‖b‖`.
pub fn solve_on_support(
    a: &ComplexMatrix,
    support: &[usize],
    b: &[Complex64],
) -> Result<LeastSquares> {
    if let Some(&bad) = support.iter().find(|&&j| j >= a.n_cols()) {
        return Err(Error::DimensionMismatch(format!(
            "support index {bad} outside {} columns",
            a.n_cols()
        )));
    }
    solve_least_squares(&a.select_columns(support), b)
}

fn pivoted_qr_solve(a: &ComplexMatrix, b: &[Complex64]) -> (Vec<Complex64>, usize) {
    let (m, n) = (a.n_rows(), a.n_cols());
    let mut work = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let max_norm = (0..n).map(|j| a.column_norm(j)).fold(0.0, f64::max);
    let tol = PIVOT_TOLERANCE * max_norm;

    let mut reflectors = Vec::with_capacity(n);
    let mut rank = 0;
    for k in 0..n.min(m) {
        // Exact trailing norms; the panels here are small.
        let mut best = k;
        let mut best_norm = -1.0;
        for j in k..n {
            let nj = norm(&work.col(j)[k..]);
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best_norm <= tol {
            break;
        }
        if best != k {
            swap_columns(&mut work, k, best);
            perm.swap(k, best);
        }
        let Some((h, diag)) = Reflector::annihilating(&work.col(k)[k..], k) else {
            break;
        };
        {
            let col = work.col_mut(k);
            col[k] = diag;
            for z in &mut col[k + 1..] {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        for j in k + 1..n {
            h.apply(work.col_mut(j));
        }
        reflectors.push(h);
        rank += 1;
    }

    let mut qtb = b.to_vec();
    for h in &reflectors {
        h.apply(&mut qtb);
    }
    let c = &qtb[..rank];

    let y = if rank == n {
        back_substitute(&work, c)
    } else {
        min_norm_trapezoid(&work, rank, n, c)
    };

    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for (i, &p) in perm.iter().enumerate() {
        z[p] = y[i];
    }
    (z, rank)
}

fn swap_columns(m: &mut ComplexMatrix, i: usize, j: usize) {
    let rows = m.n_rows();
    for r in 0..rows {
        let t = m.get(r, i);
        m.set(r, i, m.get(r, j));
        m.set(r, j, t);
    }
}

/// Solves `R z = c` for the leading `c.len()` × `c.len()` upper triangle of `r`.
fn back_substitute(r: &ComplexMatrix, c: &[Complex64]) -> Vec<Complex64> {
    let k = c.len();
    let mut z = vec![Complex64::new(0.0, 0.0); k];
    for i in (0..k).rev() {
        let mut acc = c[i];
        for j in i + 1..k {
            acc -= r.get(i, j) * z[j];
        }
        z[i] = acc / r.get(i, i);
    }
    z
}

/// Minimum-norm `y` with `T y = c`, where `T` is the leading `rank × n` block of `r`.
fn min_norm_trapezoid(r: &ComplexMatrix, rank: usize, n: usize, c: &[Complex64]) -> Vec<Complex64> {
    // Tᴴ = Q₂ R₂, so T = R₂ᴴ Q₂ᴴ and y = Q₂ [R₂⁻ᴴ c; 0].
    let mut th = ComplexMatrix::from_fn(n, rank, |i, j| r.get(j, i).conj());
    let mut reflectors = Vec::with_capacity(rank);
    for k in 0..rank {
        let Some((h, diag)) = Reflector::annihilating(&th.col(k)[k..], k) else {
            break;
        };
        {
            let col = th.col_mut(k);
            col[k] = diag;
            for z in &mut col[k + 1..] {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        for j in k + 1..rank {
            h.apply(th.col_mut(j));
        }
        reflectors.push(h);
    }
    // Forward substitution with R₂ᴴ (lower triangular).
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..rank {
        let mut acc = c[i];
        for j in 0..i {
            acc -= th.get(j, i).conj() * w[j];
        }
        w[i] = acc / th.get(i, i).conj();
    }
    for h in reflectors.iter().rev() {
        h.apply(&mut w);
    }
    w
}
