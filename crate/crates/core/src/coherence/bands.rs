use super::CoherencePattern;
use crate::{Error, Result};

/// η-coherence bands `B_η(k) = {i : μ(i,k) > η} ∪ {k}`, one sorted list per column.
///
/// Membership is symmetric: `i ∈ B_η(k)` iff `k ∈ B_η(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceBands {
    eta: f64,
    neighbors: Vec<Vec<usize>>,
}

pub fn bands(pattern: &CoherencePattern, eta: f64) -> Result<CoherenceBands> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("η must lie in (0, 1), got {eta}")));
    }
    let n = pattern.n();
    let neighbors = match pattern.shift_profile() {
        Some((profile, cyclic)) => {
            let offsets: Vec<usize> = (1..n).filter(|&d| profile[d] > eta).collect();
            (0..n)
                .map(|k| {
                    let mut list = Vec::with_capacity(2 * offsets.len() + 1);
                    list.push(k);
                    for &d in &offsets {
                        if cyclic {
                            list.push((k + d) % n);
                        } else {
                            if d <= k {
                                list.push(k - d);
                            }
                            if k + d < n {
                                list.push(k + d);
                            }
                        }
                    }
                    list.sort_unstable();
                    list.dedup();
                    list
                })
                .collect()
        }
        None => (0..n)
            .map(|k| {
                let row = pattern.dense_row(k).expect("dense storage");
                row.iter()
                    .enumerate()
                    .filter(|&(i, &v)| i == k || v > eta)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect(),
    };
    Ok(CoherenceBands { eta, neighbors })
}

impl CoherenceBands {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Number of columns covered.
    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// `B_η(k)`, sorted.
    pub fn band(&self, k: usize) -> &[usize] {
        &self.neighbors[k]
    }

    pub fn contains(&self, k: usize, i: usize) -> bool {
        self.neighbors[k].binary_search(&i).is_ok()
    }

    /// Largest band size over all columns.
    pub fn max_band_len(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn band_mask(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for &k in set {
            for &i in &self.neighbors[k] {
                mask[i] = true;
            }
        }
        mask
    }

    /// Membership mask of `B_η⁽²⁾(S) = B_η(B_η(S))`.
    pub fn secondary_mask(&self, set: &[usize]) -> Vec<bool> {
        let mut first = vec![false; self.len()];
        let mut mask = vec![false; self.len()];
        for &k in set {
            for &m in &self.neighbors[k] {
                if !first[m] {
                    first[m] = true;
                    for &i in &self.neighbors[m] {
                        mask[i] = true;
                    }
                }
            }
        }
        mask
    }

    /// `B_η(S) = ∪_{k∈S} B_η(k)`, sorted.
    pub fn band_of_set(&self, set: &[usize]) -> Vec<usize> {
        mask_to_indices(&self.band_mask(set))
    }

    /// `B_η⁽²⁾(S)`, sorted.
    pub fn secondary_band(&self, set: &[usize]) -> Vec<usize> {
        mask_to_indices(&self.secondary_mask(set))
    }
}

fn mask_to_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect()
}

/// True iff `B_η(i) ∩ B_η⁽²⁾(j) = ∅` for every pair of distinct `i`, `j` in `support`.
pub fn check_separation(bands: &CoherenceBands, support: &[usize]) -> bool {
    for (a, &j) in support.iter().enumerate() {
        let far = bands.secondary_mask(&[j]);
        for (b, &i) in support.iter().enumerate() {
            if a != b && bands.band(i).iter().any(|&m| far[m]) {
                return false;
            }
        }
    }
    true
}
