//! Greedy pursuit: OMP, band-excluded OMP, local optimization and BLOOMP.
//!
//! All algorithms pick by `argmax_i |⟨r, a_i⟩|` with ties going to the lowest
//! index, refit amplitudes by least squares on the current support, and stop
//! early once the residual falls below the configured relative tolerance.

mod local;
mod pursuit;

pub use local::{local_optimization, LocalOptimization};
pub use pursuit::{
    bloomp, bomp, omp, recover, Algorithm, PursuitParams, RecoveryResult, Termination,
    DEFAULT_RESIDUAL_TOLERANCE,
};
