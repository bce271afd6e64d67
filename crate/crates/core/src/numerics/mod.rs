//! Complex dense linear algebra and seeded randomness shared by every other module.

mod lstsq;
mod matrix;
mod rng;

pub use lstsq::{solve_least_squares, solve_on_support, LeastSquares, PIVOT_TOLERANCE};
pub use matrix::{correlations, inner, norm, ComplexMatrix, ComplexVector};
pub use rng::{complex_normal, RngStream};
