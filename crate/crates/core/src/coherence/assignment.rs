use super::CoherenceBands;
use crate::{Error, Result};

/// How an estimated support sits relative to the bands of the true support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandAssignment {
    /// Every estimated index lies in `B_η(supp(x))`.
    pub contained: bool,
    /// Every estimated index lies in the band of exactly one true index.
    pub unique: bool,
    /// `unique`, and the induced map from estimates to true indices is a bijection.
    pub one_to_one: bool,
}

impl BandAssignment {
    /// Support-containment conclusion of the BOMP guarantee.
    pub fn bomp_conclusion(&self) -> bool {
        self.contained && self.unique
    }

    /// Conclusion of the BLOOMP guarantee, including the one-to-one assignment.
    pub fn bloomp_conclusion(&self) -> bool {
        self.contained && self.unique && self.one_to_one
    }
}

pub fn band_assignment(
    bands: &CoherenceBands,
    true_support: &[usize],
    est_support: &[usize],
) -> BandAssignment {
    let mut contained = true;
    let mut unique = true;
    let mut owners = Vec::with_capacity(est_support.len());
    for &e in est_support {
        let hits: Vec<usize> = true_support
            .iter()
            .copied()
            .filter(|&t| bands.contains(t, e))
            .collect();
        contained &= !hits.is_empty();
        unique &= hits.len() == 1;
        if let [t] = hits[..] {
            owners.push(t);
        }
    }
    owners.sort_unstable();
    owners.dedup();
    let one_to_one =
        unique && owners.len() == est_support.len() && est_support.len() == true_support.len();
    BandAssignment {
        contained,
        unique,
        one_to_one,
    }
}

/// Smallest η whose band half-width in an averaged cross-section is at most
/// `half_width`: the largest profile value beyond that offset.
pub fn default_eta(profile: &[f64], half_width: usize) -> Result<f64> {
    let tail = profile.get(half_width + 1..).unwrap_or(&[]);
    let eta = tail.iter().copied().fold(0.0, f64::max);
    if tail.is_empty() || !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cannot derive η from a profile of length {} with half-width {half_width}",
            profile.len()
        )));
    }
    Ok(eta)
}
