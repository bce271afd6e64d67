//! Sensing matrices, random sparse objects and the off-grid point-source simulator.

mod geometry;
mod matrices;
mod scene;
mod signal;

pub use geometry::ParaxialGeometry;
pub use matrices::{
    build_dft_frame, build_gaussian_matrix, build_paraxial_matrix, compose, paraxial_from_coords,
    Ensemble, SensingMatrix,
};
pub use scene::{nearest_grid_index, simulate_point_sources, ContinuumScene, PointSourceData};
pub use signal::{generate_objects, synthesize_measurements, Measurements, SparseSignal, Topology};
