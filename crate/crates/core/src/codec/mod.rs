//! Lossless rack codec.
//!
//! A rack is written as its information tuple followed by a residual that
//! holds, for each component representative of `G_T` whose map is not already
//! known, the image of each unmerged component's minimum. The decoder rebuilds
//! each representative's map by propagation along `G_T` and every other map by
//! conjugation along directed paths.
//!
//! See `docs/FORMAT.md` for the byte layout.

mod audit;
mod bits;
mod info;
mod stats;
mod stream;

pub use audit::{merge_bound_audit, AuditFail, AuditFailKind, AuditReport, MergeDrop};
pub use bits::{BitReader, BitWriter};
pub use info::{
    build_info, check_invariance, degree_split, greedy_order, greedy_t, InfoTuple, PartialMap,
};
pub use stats::{encoding_stats, zeta_of_histogram, CodecStats};
pub use stream::{decode, encode, extract_residual, Residual, ResidualEntry, MAGIC};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("invalid parameters for n = {n}: {reason}")]
    InvalidParams { n: usize, reason: String },
    #[error("corrupt stream: {0}")]
    CorruptStream(String),
    #[error("inconsistent decode: {0}")]
    InconsistentDecode(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Degree threshold `delta` and greedy size cap `cap_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodecParams {
    pub delta: usize,
    pub cap_l: usize,
}

impl CodecParams {
    /// `delta = ⌈(log₂ n)³⌉` clamped into `1..=n−1`, `cap_l = ⌊(log₂ n)²⌋`.
    pub fn default_for(n: usize) -> Self {
        let lg = if n > 1 { (n as f64).log2() } else { 0.0 };
        let delta = (lg.powi(3) - 1e-9).ceil().max(1.0) as usize;
        CodecParams {
            delta: delta.min(n.saturating_sub(1)).max(1),
            cap_l: (lg * lg + 1e-9).floor() as usize,
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), CodecError> {
        let invalid = |reason: String| Err(CodecError::InvalidParams { n, reason });
        if n > u16::MAX as usize {
            return invalid(format!("order exceeds {}", u16::MAX));
        }
        if self.delta > u16::MAX as usize || self.cap_l > u16::MAX as usize {
            return invalid("parameters must fit in 16 bits".into());
        }
        if n >= 2 && !(1..n).contains(&self.delta) {
            return invalid(format!("delta = {} outside 1..={}", self.delta, n - 1));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params() {
        assert_eq!(
            CodecParams::default_for(1),
            CodecParams { delta: 1, cap_l: 0 }
        );
        assert_eq!(
            CodecParams::default_for(2),
            CodecParams { delta: 1, cap_l: 1 }
        );
        assert_eq!(
            CodecParams::default_for(3),
            CodecParams { delta: 2, cap_l: 2 }
        );
        assert_eq!(
            CodecParams::default_for(4),
            CodecParams { delta: 3, cap_l: 4 }
        );
        assert_eq!(
            CodecParams::default_for(8),
            CodecParams { delta: 7, cap_l: 9 }
        );
        // (log₂ 4096)³ = 1728
        assert_eq!(
            CodecParams::default_for(4096),
            CodecParams {
                delta: 1728,
                cap_l: 144
            }
        );
    }

    #[test]
    fn validation() {
        assert!(CodecParams { delta: 0, cap_l: 1 }.validate(4).is_err());
        assert!(CodecParams { delta: 4, cap_l: 1 }.validate(4).is_err());
        assert!(CodecParams { delta: 3, cap_l: 0 }.validate(4).is_ok());
        assert!(CodecParams { delta: 9, cap_l: 0 }.validate(1).is_ok());
    }
}
