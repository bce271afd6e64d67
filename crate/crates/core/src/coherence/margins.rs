use crate::{Error, Result};

/// Left-hand side of the BOMP recovery condition,
/// `η(5s − 4)·x_max/x_min + 5‖e‖₂/(2·x_min)`. The condition holds when the
/// value is below 1.
pub fn theorem1_margin(
    eta: f64,
    sparsity: usize,
    x_max: f64,
    x_min: f64,
    noise_norm: f64,
) -> Result<f64> {
    if !(x_min > 0.0) {
        return Err(Error::InvalidParameter(format!("x_min must be positive, got {x_min}")));
    }
    if sparsity == 0 {
        return Err(Error::InvalidParameter("sparsity must be positive".into()));
    }
    let s = sparsity as f64;
    Ok(eta * (5.0 * s - 4.0) * x_max / x_min + 5.0 * noise_norm / (2.0 * x_min))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theorem2Margin {
    pub threshold: f64,
    pub holds: bool,
}

/// Amplitude threshold under which local optimization may leave a band:
/// `(ε + 2(s − 1)η)·(1/(1 − η) + √(1/(1 − η)² + 1/(1 − η²)))`.
/// `ε` is taken to be the noise norm `‖e‖₂`.
pub fn theorem2_margin(
    eta: f64,
    sparsity: usize,
    noise_norm: f64,
    x_min: f64,
) -> Result<Theorem2Margin> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("η must lie in (0, 1), got {eta}")));
    }
    if sparsity == 0 {
        return Err(Error::InvalidParameter("sparsity must be positive".into()));
    }
    let s = sparsity as f64;
    let inv = 1.0 / (1.0 - eta);
    let factor = inv + (inv * inv + 1.0 / (1.0 - eta * eta)).sqrt();
    let threshold = (noise_norm + 2.0 * (s - 1.0) * eta) * factor;
    Ok(Theorem2Margin {
        threshold,
        holds: x_min > threshold,
    })
}
