use crate::{Error, Result};

/// Physical layout of the paraxial imaging problem.
///
/// Sensors sit in an aperture `[0, α]` at `z = 0`; the unknown point sources
/// lie on the target plane `z = L`, which is discretized by a regular grid of
/// `M` points with spacing `ℓ = ℓ_R / F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParaxialGeometry {
    wavenumber: f64,
    distance: f64,
    aperture: f64,
    refinement: usize,
    grid_len: usize,
}

impl ParaxialGeometry {
    pub fn new(
        wavenumber: f64,
        distance: f64,
        aperture: f64,
        refinement: usize,
        grid_len: usize,
    ) -> Result<Self> {
        for (name, v) in [
            ("wavenumber", wavenumber),
            ("distance", distance),
            ("aperture", aperture),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if refinement == 0 || grid_len == 0 {
            return Err(Error::InvalidParameter(
                "refinement factor and grid size must be positive".into(),
            ));
        }
        Ok(Self {
            wavenumber,
            distance,
            aperture,
            refinement,
            grid_len,
        })
    }

    /// Unit geometry: `λ = 1`, `L = 1`, `α = 1`, hence `ℓ_R = 1` and `ℓ = 1/F`.
    pub fn normalized(refinement: usize, grid_len: usize) -> Result<Self> {
        Self::new(2.0 * std::f64::consts::PI, 1.0, 1.0, refinement, grid_len)
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn refinement(&self) -> usize {
        self.refinement
    }

    pub fn grid_len(&self) -> usize {
        self.grid_len
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavenumber
    }

    /// `ℓ_R = Lλ/α`.
    pub fn rayleigh_length(&self) -> f64 {
        self.distance * self.wavelength() / self.aperture
    }

    /// `ℓ = ℓ_R / F`.
    pub fn spacing(&self) -> f64 {
        self.rayleigh_length() / self.refinement as f64
    }

    /// Position `p_j = j·ℓ` of grid point `j`.
    pub fn grid_point(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Grid extent `M·ℓ`; sources must lie in `[0, M·ℓ)`.
    pub fn extent(&self) -> f64 {
        self.grid_len as f64 * self.spacing()
    }

    /// Same optics with a different grid.
    pub fn with_grid(&self, refinement: usize, grid_len: usize) -> Result<Self> {
        Self::new(
            self.wavenumber,
            self.distance,
            self.aperture,
            refinement,
            grid_len,
        )
    }
}
