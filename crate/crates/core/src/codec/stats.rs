use super::info::InfoTuple;
use super::stream::encode_detailed;
use super::{CodecError, CodecParams};
use crate::rack::Rack;
use serde::Serialize;

/// Size accounting for one encoding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodecStats {
    pub n: usize,
    pub params: CodecParams,
    /// `eta[q]` = number of vertices in components of `G_T` of size `q`; `eta[0] = 0`.
    pub eta: Vec<usize>,
    pub cp: usize,
    pub zeta: f64,
    pub residual_bits: u64,
    /// Residual size had every index used its own `⌈log₂|D|⌉`-bit field.
    pub per_index_bits: u64,
    pub stored_indices: usize,
    pub header_bits: u64,
    pub total_bytes: usize,
    /// `n²/4`.
    pub bound: f64,
    pub t: Vec<usize>,
}

/// `ζ = (Σ_p η_p/p)(Σ_q (log₂ q) η_q/q)` for a histogram indexed by component size.
pub fn zeta_of_histogram(eta: &[usize]) -> f64 {
    let mut comps = 0.0;
    let mut logs = 0.0;
    for (q, &e) in eta.iter().enumerate().skip(1) {
        let share = e as f64 / q as f64;
        comps += share;
        logs += share * (q as f64).log2();
    }
    comps * logs
}

pub fn encoding_stats(rack: &Rack, params: &CodecParams) -> Result<CodecStats, CodecError> {
    let n = rack.order();
    let enc = encode_detailed(rack, params)?;
    let (eta, cp, t) = match &enc.info {
        Some(info) => histogram(info)?,
        None => (vec![0, 1], 1, vec![]),
    };
    Ok(CodecStats {
        n,
        params: *params,
        zeta: zeta_of_histogram(&eta),
        eta,
        cp,
        residual_bits: enc.residual_bits,
        per_index_bits: enc.residual.entries.iter().map(|e| e.naive_bit_len()).sum(),
        stored_indices: enc.residual.index_count(),
        header_bits: enc.info_bits,
        total_bytes: enc.bytes.len(),
        bound: (n * n) as f64 / 4.0,
        t,
    })
}

fn histogram(info: &InfoTuple) -> Result<(Vec<usize>, usize, Vec<usize>), CodecError> {
    let comps = info.g_t()?.components();
    Ok((comps.eta().to_vec(), comps.cp(), info.t_set.clone()))
}
