use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::ParaxialGeometry;
use crate::numerics::{ComplexMatrix, RngStream};
use crate::{Error, Result};

/// Which construction produced a sensing matrix, with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    Paraxial {
        n_sensors: usize,
        grid_len: usize,
        refinement: usize,
    },
    DftFrame {
        r: usize,
        refinement: usize,
    },
    Gaussian {
        n: usize,
        r: usize,
    },
    Composed {
        outer: Box<Ensemble>,
        inner: Box<Ensemble>,
    },
    /// A caller-supplied matrix with no known structure.
    Custom,
}

/// Measurement matrix plus the metadata needed to reason about its structure.
#[derive(Clone, Debug, PartialEq)]
pub struct SensingMatrix {
    matrix: ComplexMatrix,
    ensemble: Ensemble,
    /// Normalized sensor coordinates `u_l = r_l / α` (paraxial only).
    sensor_coords: Option<Vec<f64>>,
    geometry: Option<ParaxialGeometry>,
    /// Left factor `Φ` of a composed matrix `ΦΨ`.
    outer_factor: Option<ComplexMatrix>,
}

impl SensingMatrix {
    /// Wraps an arbitrary matrix.
    pub fn custom(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite("sensing matrix"));
        }
        Ok(Self {
            matrix,
            ensemble: Ensemble::Custom,
            sensor_coords: None,
            geometry: None,
            outer_factor: None,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    pub fn geometry(&self) -> Option<&ParaxialGeometry> {
        self.geometry.as_ref()
    }

    pub fn outer_factor(&self) -> Option<&ComplexMatrix> {
        self.outer_factor.as_ref()
    }

    pub fn sensor_coords(&self) -> Option<&[f64]> {
        self.sensor_coords.as_deref()
    }

    /// Physical sensor positions `r_l = u_l·α` (paraxial only).
    pub fn sensor_positions(&self) -> Option<Vec<f64>> {
        let g = self.geometry?;
        self.sensor_coords
            .as_ref()
            .map(|u| u.iter().map(|&u| u * g.aperture()).collect())
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }
}

impl AsRef<ComplexMatrix> for SensingMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `e^{−2πi t}` with `t` reduced to its fractional part first.
#[inline]
fn unit_phasor(t: f64) -> Complex64 {
    let angle = -2.0 * PI * t.fract();
    Complex64::new(angle.cos(), angle.sin())
}

/// Paraxial matrix from given normalized sensor coordinates `u_l ∈ [0, 1]`.
///
/// Entry `(l, j) = N^{−1/2}·exp(−2πi·u_l·j/F)`. The ratio `j/F` is reduced to
/// lowest terms before use, so column `j` on an `F` grid is bit-identical to
/// column `c·j` on a `c·F` grid.
pub fn paraxial_from_coords(
    coords: &[f64],
    grid_len: usize,
    refinement: usize,
) -> Result<SensingMatrix> {
    if coords.is_empty() || grid_len == 0 || refinement == 0 {
        return Err(Error::InvalidParameter(
            "paraxial matrix needs N, M, F >= 1".into(),
        ));
    }
    if let Some(&u) = coords.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(Error::InvalidParameter(format!(
            "normalized sensor coordinate {u} outside [0, 1]"
        )));
    }
    let n = coords.len();
    let scale = 1.0 / (n as f64).sqrt();
    let mut data = Vec::with_capacity(n * grid_len);
    for j in 0..grid_len {
        let g = gcd(j, refinement).max(1);
        let (num, den) = ((j / g) as f64, (refinement / g) as f64);
        for &u in coords {
            data.push(unit_phasor(u * num / den) * scale);
        }
    }
    let matrix = ComplexMatrix::from_col_major(n, grid_len, data)?;
    Ok(SensingMatrix {
        matrix,
        ensemble: Ensemble::Paraxial {
            n_sensors: n,
            grid_len,
            refinement,
        },
        sensor_coords: Some(coords.to_vec()),
        geometry: None,
        outer_factor: None,
    })
}

/// Paraxial sensing matrix with `N` sensors drawn i.i.d. uniform on the aperture.
pub fn build_paraxial_matrix(
    geometry: &ParaxialGeometry,
    n_sensors: usize,
    stream: RngStream,
) -> Result<SensingMatrix> {
    if n_sensors == 0 {
        return Err(Error::InvalidParameter("need at least one sensor".into()));
    }
    let mut rng = stream.rng();
    let coords: Vec<f64> = (0..n_sensors).map(|_| rng.gen_range(0.0..=1.0)).collect();
    let mut sm = paraxial_from_coords(&coords, geometry.grid_len(), geometry.refinement())?;
    sm.geometry = Some(*geometry);
    Ok(sm)
}

/// Redundant DFT frame, `Ψ_{k,j} = R^{−1/2}·exp(−2πi·k·j/(RF))` for zero-based `k`, `j`.
pub fn build_dft_frame(r: usize, refinement: usize) -> Result<SensingMatrix> {
    if r == 0 || refinement == 0 {
        return Err(Error::InvalidParameter("DFT frame needs R, F >= 1".into()));
    }
    let cols = r * refinement;
    let scale = 1.0 / (r as f64).sqrt();
    let matrix = ComplexMatrix::from_fn(r, cols, |k, j| {
        unit_phasor(((k * j) % cols) as f64 / cols as f64) * scale
    });
    Ok(SensingMatrix {
        matrix,
        ensemble: Ensemble::DftFrame { r, refinement },
        sensor_coords: None,
        geometry: None,
        outer_factor: None,
    })
}

/// Real Gaussian `N × R` matrix with i.i.d. entries of mean 0 and variance `1/N`.
pub fn build_gaussian_matrix(n: usize, r: usize, stream: RngStream) -> Result<SensingMatrix> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidParameter("Gaussian matrix needs N, R >= 1".into()));
    }
    let mut rng = stream.rng();
    let sd = 1.0 / (n as f64).sqrt();
    let matrix = ComplexMatrix::from_fn(n, r, |_, _| {
        let g: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(g * sd, 0.0)
    });
    Ok(SensingMatrix {
        matrix,
        ensemble: Ensemble::Gaussian { n, r },
        sensor_coords: None,
        geometry: None,
        outer_factor: None,
    })
}

/// `A = ΦΨ`.
pub fn compose(outer: &SensingMatrix, inner: &SensingMatrix) -> Result<SensingMatrix> {
    let matrix = outer.matrix.matmul(&inner.matrix)?;
    Ok(SensingMatrix {
        matrix,
        ensemble: Ensemble::Composed {
            outer: Box::new(outer.ensemble.clone()),
            inner: Box::new(inner.ensemble.clone()),
        },
        sensor_coords: None,
        geometry: None,
        outer_factor: Some(outer.matrix.clone()),
    })
}
