use num_complex::Complex64;

use super::{paraxial_from_coords, ParaxialGeometry, SparseSignal};
use crate::numerics::ComplexVector;
use crate::{Error, Result};

/// Point sources at arbitrary (not necessarily grid) positions on the target plane.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumScene {
    positions: Vec<f64>,
    strengths: Vec<Complex64>,
}

impl ContinuumScene {
    pub fn new(positions: Vec<f64>, strengths: Vec<Complex64>) -> Result<Self> {
        if positions.len() != strengths.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} positions, {} strengths",
                positions.len(),
                strengths.len()
            )));
        }
        if positions.iter().any(|p| !p.is_finite())
            || strengths.iter().any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite("scene"));
        }
        let mut sorted = positions.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("source positions must be distinct".into()));
        }
        Ok(Self {
            positions,
            strengths,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn strengths(&self) -> &[Complex64] {
        &self.strengths
    }
}

/// Output of [`simulate_point_sources`].
#[derive(Clone, Debug, PartialEq)]
pub struct PointSourceData {
    /// Normalized data `b_l`.
    pub b: ComplexVector,
    /// Gridding error `d = b − A·x_nearest − ñ`, with `ñ` the normalized external noise.
    pub d: ComplexVector,
    /// Sources snapped to their nearest grid points.
    pub x_nearest: SparseSignal,
}

impl PointSourceData {
    pub fn relative_gridding_error(&self) -> f64 {
        self.d.norm() / self.b.norm()
    }
}

/// Nearest grid index to `position`; exact midpoints go to the lower index.
pub fn nearest_grid_index(geometry: &ParaxialGeometry, position: f64) -> usize {
    let t = position / geometry.spacing();
    ((t - 0.5).ceil().max(0.0) as usize).min(geometry.grid_len() - 1)
}

/// Sensor data for off-grid sources under the paraxial Green function.
///
/// `y_l = Σ_j c_j G(r_l, ξ_j) + n_l` with
/// `G(r, ξ) = e^{iωL}/(4πL) · exp(iω|r − ξ|²/(2L))`, normalized to
/// `b_l = N^{−1/2}·4πL·e^{−iωL}·e^{−iωr_l²/(2L)}·y_l`.
/// The normalization cancels the `e^{iωL}/(4πL)` prefactor and the `r²` part
/// of the exponent analytically, which leaves `N^{−1/2}·exp(iωξ(ξ − 2r)/(2L))`
/// per source; that expanded form is what is evaluated, to avoid
/// differencing large phases.
pub fn simulate_point_sources(
    geometry: &ParaxialGeometry,
    scene: &ContinuumScene,
    sensor_positions: &[f64],
    noise: Option<&[Complex64]>,
) -> Result<PointSourceData> {
    let n = sensor_positions.len();
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one sensor".into()));
    }
    if let Some(&r) = sensor_positions
        .iter()
        .find(|&&r| !(0.0..=geometry.aperture()).contains(&r))
    {
        return Err(Error::InvalidParameter(format!(
            "sensor position {r} outside aperture [0, {}]",
            geometry.aperture()
        )));
    }
    if let Some(noise) = noise {
        if noise.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} noise samples for {n} sensors",
                noise.len()
            )));
        }
    }
    let extent = geometry.extent();
    if let Some(&p) = scene
        .positions()
        .iter()
        .find(|&&p| !(0.0..extent).contains(&p))
    {
        return Err(Error::SourceOutsideGrid {
            position: p,
            extent,
        });
    }

    let (omega, l) = (geometry.wavenumber(), geometry.distance());
    let scale = 1.0 / (n as f64).sqrt();

    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for (bl, &r) in b.iter_mut().zip(sensor_positions) {
        for (&xi, &c) in scene.positions().iter().zip(scene.strengths()) {
            *bl += c * Complex64::from_polar(scale, omega * xi * (xi - 2.0 * r) / (2.0 * l));
        }
    }
    let normalized_noise: Vec<Complex64> = match noise {
        Some(noise) => noise
            .iter()
            .zip(sensor_positions)
            .map(|(&nl, &r)| {
                let factor = 4.0 * std::f64::consts::PI * l * scale;
                let phase = -omega * l - omega * r * r / (2.0 * l);
                nl * Complex64::from_polar(factor, phase)
            })
            .collect(),
        None => vec![Complex64::new(0.0, 0.0); n],
    };
    for (bl, nl) in b.iter_mut().zip(&normalized_noise) {
        *bl += nl;
    }

    let mut pairs = Vec::with_capacity(scene.positions().len());
    for (&xi, &c) in scene.positions().iter().zip(scene.strengths()) {
        let j = nearest_grid_index(geometry, xi);
        let p = geometry.grid_point(j);
        pairs.push((j, c * Complex64::from_polar(1.0, omega * p * p / (2.0 * l))));
    }
    let mut indices: Vec<usize> = pairs.iter().map(|&(j, _)| j).collect();
    indices.sort_unstable();
    if indices.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(
            "two sources snap to the same grid point; refine the grid".into(),
        ));
    }
    let x_nearest = SparseSignal::from_pairs(geometry.grid_len(), pairs)?;

    let coords: Vec<f64> = sensor_positions
        .iter()
        .map(|&r| r / geometry.aperture())
        .collect();
    let a = paraxial_from_coords(&coords, geometry.grid_len(), geometry.refinement())?;
    let on_grid = x_nearest.apply(a.matrix())?;
    let d: Vec<Complex64> = b
        .iter()
        .zip(on_grid.iter())
        .zip(&normalized_noise)
        .map(|((bl, al), nl)| bl - al - nl)
        .collect();

    Ok(PointSourceData {
        b: ComplexVector::new(b)?,
        d: ComplexVector::new(d)?,
        x_nearest,
    })
}
