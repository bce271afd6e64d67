//! Sparse recovery for compressed sensing with highly coherent, redundant
//! sensing matrices.
//!
//! The crate provides band-excluded orthogonal matching pursuit (BOMP), a
//! local single-swap optimization step (LO), and their combination (BLOOMP),
//! together with the two test beds used to exercise them: a paraxial imaging
//! grid refined below the Rayleigh length, and a redundant DFT frame sensed
//! through a Gaussian matrix.
//!
//! Module map:
//!
//! - [`numerics`]: dense complex matrices, pivoted-QR least squares, seeded streams.
//! - [`ensembles`]: sensing matrix builders, random sparse objects, off-grid simulation.
//! - [`coherence`]: coherence patterns, η-coherence bands and theorem margins.
//! - [`recovery`]: OMP, BOMP, LO and BLOOMP.
//! - [`harness`]: Monte Carlo trials, metrics, sweeps and CSV output.

pub mod coherence;
pub mod ensembles;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod recovery;

pub use error::{Error, Result};
pub use num_complex::Complex64;
