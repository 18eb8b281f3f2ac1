//! Numerical and Monte Carlo checks of the inequalities behind the codec.
//!
//! Randomness comes from ChaCha8 seeded per chunk of 4096 trials with
//! `seed ^ chunk_index`, so results do not depend on the number of threads.

mod graph_checks;
mod prob;
mod wset;
mod zeta;

pub use graph_checks::{
    irregular_components, merge_calculus_check, orbit_check, orbit_partition, MergeCalculusCounts,
};
pub use prob::{
    chernoff_check, monitored_vertices, random_subset_check, ChernoffReport, RandomSubsetReport,
    Tail, VertexTail, SE_SLACK,
};
pub use wset::{default_bad_threshold, default_p, find_w, propagate_maps, WSearchResult};
pub use zeta::{
    claim_calc_gap, claim_calc_grid, compare_to_bound, for_each_composition, zeta_bound_sweep,
    zeta_of, BoundCmp, EtaSequence, ExactZeta, ZetaSweep, CALC_TOLERANCE, EXHAUSTIVE_MAX,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub const CHUNK: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("η of length {len} sums to {sum}")]
    InvalidEta { len: usize, sum: usize },
}

/// Uniform JSON shape for every check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub statistic: f64,
    pub bound: f64,
    pub pass: bool,
    pub detail: serde_json::Value,
}

impl CheckReport {
    pub fn new(
        check: &str,
        params: serde_json::Value,
        seed: Option<u64>,
        statistic: f64,
        bound: f64,
        pass: bool,
        detail: serde_json::Value,
    ) -> Self {
        CheckReport {
            check: check.to_string(),
            params,
            seed,
            statistic,
            bound,
            pass,
            detail,
        }
    }
}

/// `(chunk index, trial count)` covering `trials`.
pub(crate) fn chunks(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(CHUNK))
        .map(|i| (i, CHUNK.min(trials - i * CHUNK)))
        .collect()
}

pub(crate) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ chunk)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking() {
        assert!(chunks(0).is_empty());
        assert_eq!(chunks(5000), vec![(0, 4096), (1, 904)]);
        assert_eq!(chunks(8192), vec![(0, 4096), (1, 4096)]);
    }
}
