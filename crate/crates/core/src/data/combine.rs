use rand::seq::index::sample;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Draws `n_per` individual plays uniformly without replacement from every
/// source and merges the draws into one dataset of `n_per × sources` plays.
pub fn subsample_combine(datasets: &[Dataset], n_per: usize, seed: u64, source: &str) -> Result<Dataset> {
    let mut parts = Vec::with_capacity(datasets.len());
    for (s, d) in datasets.iter().enumerate() {
        let units = d.unit_rows();
        if units.len() < n_per {
            return Err(Error::InsufficientObservations {
                source_name: d.source().to_string(),
                needed: n_per,
                available: units.len(),
            });
        }
        let mut rng = stream_rng(seed, s as u64);
        let mut counts = vec![0u64; d.observations().len()];
        for i in sample(&mut rng, units.len(), n_per) {
            counts[units[i]] += 1;
        }
        parts.push(d.with_counts(&counts));
    }
    Dataset::merge(&parts, source)
}
