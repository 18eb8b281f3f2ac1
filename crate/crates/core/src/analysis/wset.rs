use super::{AnalysisError, CheckReport};
use crate::codec::degree_split;
use crate::graph::{subset_out_degrees, ColoredDigraph};
use crate::perm::Perm;
use crate::rack::Rack;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::VecDeque;

/// `(log₂ n)^{−3/2}`, the sampling probability used asymptotically.
pub fn default_p(n: usize) -> f64 {
    let lg = (n.max(2) as f64).log2();
    lg.powf(-1.5).min(1.0)
}

/// `(log₂ n)^{3/2} / 2`, the asymptotic badness threshold.
pub fn default_bad_threshold(n: usize) -> f64 {
    (n.max(1) as f64).log2().powf(1.5) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WSearchResult {
    /// `W = U ∪ V`, ascending.
    pub w: Vec<usize>,
    /// The accepted sample.
    pub u: Vec<usize>,
    /// One vertex per component of `G_U` inside `S_>Δ`.
    pub v: Vec<usize>,
    pub s_high: Vec<usize>,
    pub p: f64,
    pub bad_threshold: f64,
    pub attempts: u64,
    /// The size cap held and no vertex of `S_>Δ` was bad.
    pub found: bool,
    /// `found`, and propagation from `W` reproduced every map on `S_>Δ`.
    pub certified: bool,
}

impl WSearchResult {
    pub fn report(&self, delta: usize, seed: u64, max_attempts: u64) -> CheckReport {
        CheckReport::new(
            "find_w",
            json!({ "delta": delta, "p": self.p, "bad_threshold": self.bad_threshold, "max_attempts": max_attempts }),
            Some(seed),
            self.attempts as f64,
            max_attempts as f64,
            self.certified,
            serde_json::to_value(self).expect("serialisable"),
        )
    }
}

/// Rebuilds `f_u` for every `u` reachable from a vertex of `roots` in `G_U`,
/// from the maps of `U` and of the roots, by conjugation along BFS trees.
pub fn propagate_maps(rack: &Rack, u: &[usize], roots: &[usize]) -> Vec<Option<Perm>> {
    let n = rack.order();
    let g = ColoredDigraph::from_rack(rack, u);
    let mut out = vec![Vec::new(); n];
    for e in g.edges() {
        out[e.from].push((e.to, e.color));
    }
    let mut known: Vec<Option<Perm>> = vec![None; n];
    for &r in roots {
        known[r] = Some(rack.map(r).clone());
        let mut queue = VecDeque::from([r]);
        let mut seen = vec![false; n];
        seen[r] = true;
        while let Some(w) = queue.pop_front() {
            for &(x, c) in &out[w] {
                if !seen[x] {
                    seen[x] = true;
                    let fw = known[w].as_ref().expect("parent is known");
                    let f = fw.conjugate_by(rack.map(c));
                    known[x].get_or_insert(f);
                    queue.push_back(x);
                }
            }
        }
    }
    known
}

/// Samples `X` until `|X| ≤ 3np/2` and every `v ∈ S_>Δ` has `d⁺_X(v) > bad_threshold`,
/// then adds one representative per component of `G_X` inside `S_>Δ` and checks
/// that conjugation from `W` reproduces every map indexed by `S_>Δ`.
pub fn find_w(
    rack: &Rack,
    delta: usize,
    p: f64,
    bad_threshold: f64,
    max_attempts: u64,
    seed: u64,
) -> Result<WSearchResult, AnalysisError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(AnalysisError::InvalidParameter {
            name: "p",
            value: p,
        });
    }
    let n = rack.order();
    let (_, s_high) = degree_split(rack, delta);
    let mut result = WSearchResult {
        w: vec![],
        u: vec![],
        v: vec![],
        s_high: s_high.clone(),
        p,
        bad_threshold,
        attempts: 0,
        found: false,
        certified: false,
    };
    if s_high.is_empty() {
        result.found = true;
        result.certified = true;
        return Ok(result);
    }
    let cap = 1.5 * n as f64 * p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while result.attempts < max_attempts {
        result.attempts += 1;
        let x: Vec<usize> = (0..n).filter(|_| p >= 1.0 || rng.gen_bool(p)).collect();
        if x.len() as f64 > cap {
            continue;
        }
        let deg = subset_out_degrees(rack, &x);
        if s_high.iter().any(|&v| deg[v] as f64 <= bad_threshold) {
            continue;
        }
        result.found = true;
        let comps = ColoredDigraph::from_rack(rack, &x).components();
        let mut inside = true;
        let mut reps = Vec::new();
        for part in comps.parts() {
            let high = part
                .iter()
                .filter(|v| s_high.binary_search(v).is_ok())
                .count();
            if high == 0 {
                continue;
            }
            inside &= high == part.len();
            reps.push(part[0]);
        }
        let known = propagate_maps(rack, &x, &reps);
        let mut w: Vec<usize> = x.iter().chain(&reps).copied().collect();
        w.sort_unstable();
        w.dedup();
        result.certified = inside
            && s_high
                .iter()
                .all(|&s| known[s].as_ref() == Some(rack.map(s)));
        result.w = w;
        result.u = x;
        result.v = reps;
        return Ok(result);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{
        conjugation_quandle_of, dihedral_quandle, symmetric_group, trivial_rack,
    };

    #[test]
    fn empty_high_part() {
        let r = find_w(&trivial_rack(5), 1, 0.5, 1.0, 10, 0).unwrap();
        assert!(r.certified && r.w.is_empty() && r.attempts == 0);
    }

    #[test]
    fn full_sample() {
        let r = find_w(&dihedral_quandle(5), 1, 1.0, 0.0, 3, 0).unwrap();
        assert!(r.certified);
        assert_eq!(r.w, vec![0, 1, 2, 3, 4]);
        assert_eq!(r.v, vec![0]);
    }

    #[test]
    fn symmetric_group_quandle() {
        let q = conjugation_quandle_of(&symmetric_group(3));
        let r = find_w(&q, 1, 0.8, 1.0, 100, 42).unwrap();
        // the transpositions 1, 2, 5 are exactly the vertices of out-degree 2
        assert_eq!(r.s_high, vec![1, 2, 5]);
        assert!(r.certified, "{r:?}");
    }

    #[test]
    fn exhausted_attempts_are_reported() {
        let q = conjugation_quandle_of(&symmetric_group(3));
        let r = find_w(&q, 1, 0.8, default_bad_threshold(6), 20, 1).unwrap();
        assert!(!r.found && !r.certified);
        assert_eq!(r.attempts, 20);
    }
}
