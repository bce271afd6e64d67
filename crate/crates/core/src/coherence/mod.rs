//! Coherence patterns, η-coherence bands and the recovery-guarantee margins.

mod assignment;
mod bands;
mod margins;
mod pattern;

pub use assignment::{band_assignment, default_eta, BandAssignment};
pub use bands::{bands, check_separation, CoherenceBands};
pub use margins::{theorem1_margin, theorem2_margin, Theorem2Margin};
pub use pattern::{
    coherence_pattern, coherence_pattern_direct, coherence_row, mutual_coherence,
    CoherencePattern,
};
