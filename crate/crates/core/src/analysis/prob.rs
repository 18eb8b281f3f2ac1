use super::{chunk_rng, chunks, AnalysisError, CheckReport};
use crate::graph::rack_out_degrees;
use crate::rack::Rack;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

/// Number of standard errors allowed above a bound.
pub const SE_SLACK: f64 = 3.0;
/// Vertices monitored for the out-degree tail.
pub const MONITORED: usize = 32;
const THRESHOLD_MARGIN: f64 = 1e-9;

/// Empirical frequency of one event against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tail {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub std_err: f64,
    pub bound: f64,
}

impl Tail {
    pub fn new(hits: u64, trials: u64, bound: f64) -> Self {
        let estimate = if trials == 0 {
            0.0
        } else {
            hits as f64 / trials as f64
        };
        let std_err = if trials == 0 {
            0.0
        } else {
            (estimate * (1.0 - estimate) / trials as f64).sqrt()
        };
        Tail {
            hits,
            trials,
            estimate,
            std_err,
            bound,
        }
    }

    /// `estimate − (bound + 3·SE)`; non-positive when within tolerance.
    pub fn excess(&self) -> f64 {
        self.estimate - (self.bound + SE_SLACK * self.std_err)
    }

    pub fn pass(&self) -> bool {
        self.excess() <= 0.0
    }
}

fn check_unit(name: &'static str, v: f64, closed_low: bool) -> Result<(), AnalysisError> {
    let ok = if closed_low {
        (0.0..1.0).contains(&v)
    } else {
        v > 0.0 && v < 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(AnalysisError::InvalidParameter { name, value: v })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChernoffReport {
    pub n: u64,
    pub p: f64,
    pub eps: f64,
    pub seed: u64,
    pub upper: Tail,
    pub lower: Tail,
}

impl ChernoffReport {
    pub fn pass(&self) -> bool {
        self.upper.pass() && self.lower.pass()
    }

    pub fn report(&self) -> CheckReport {
        CheckReport::new(
            "chernoff",
            json!({ "n": self.n, "p": self.p, "eps": self.eps, "trials": self.upper.trials }),
            Some(self.seed),
            self.upper.excess().max(self.lower.excess()),
            0.0,
            self.pass(),
            json!({ "upper": self.upper, "lower": self.lower }),
        )
    }
}

/// Monte Carlo estimates of `P(X ≥ (1+ε)np)` and `P(X ≤ (1−ε)np)` for
/// `X ~ Bin(n, p)` against `e^{−ε²np/3}` and `e^{−ε²np/2}`.
pub fn chernoff_check(
    n: u64,
    p: f64,
    eps: f64,
    trials: u64,
    seed: u64,
) -> Result<ChernoffReport, AnalysisError> {
    check_unit("p", p, false)?;
    check_unit("eps", eps, true)?;
    let mean = n as f64 * p;
    let hi = (1.0 + eps) * mean - THRESHOLD_MARGIN;
    let lo = (1.0 - eps) * mean + THRESHOLD_MARGIN;
    let dist = Binomial::new(n, p).map_err(|_| AnalysisError::InvalidParameter {
        name: "p",
        value: p,
    })?;
    let (up, down) = chunks(trials)
        .into_par_iter()
        .map(|(idx, len)| {
            let mut rng = chunk_rng(seed, idx);
            let (mut up, mut down) = (0u64, 0u64);
            for _ in 0..len {
                let x = dist.sample(&mut rng) as f64;
                up += u64::from(x >= hi);
                down += u64::from(x <= lo);
            }
            (up, down)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ChernoffReport {
        n,
        p,
        eps,
        seed,
        upper: Tail::new(up, trials, (-eps * eps * mean / 3.0).exp()),
        lower: Tail::new(down, trials, (-eps * eps * mean / 2.0).exp()),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexTail {
    pub v: usize,
    pub degree: usize,
    /// `δ = d⁺_v p`, the expected value of `d⁺_X(v)`.
    pub delta: f64,
    /// Tail of `d⁺_X(v) ≤ (1−ε)δ`.
    pub out_degree: Tail,
    /// Tail of `|J_v ∩ X| ≤ (1−ε)δ`.
    pub witness_set: Tail,
}

#[derive(Debug, Clone, Serialize)]
pub struct RandomSubsetReport {
    pub n: usize,
    pub p: f64,
    pub eps: f64,
    pub seed: u64,
    /// Tail of `|X| ≥ (1+ε)np`.
    pub size: Tail,
    pub vertices: Vec<VertexTail>,
    /// Trials where `d⁺_X(v) < |J_v ∩ X|`; always zero.
    pub domination_failures: u64,
    /// Trials with `p = 1` where `|X| ≠ n`; always zero.
    pub full_sample_failures: u64,
}

impl RandomSubsetReport {
    pub fn worst_excess(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|v| [v.out_degree.excess(), v.witness_set.excess()])
            .fold(self.size.excess(), f64::max)
    }

    pub fn pass(&self) -> bool {
        self.worst_excess() <= 0.0
            && self.domination_failures == 0
            && self.full_sample_failures == 0
    }

    pub fn report(&self) -> CheckReport {
        CheckReport::new(
            "random_subset",
            json!({ "n": self.n, "p": self.p, "eps": self.eps, "trials": self.size.trials }),
            Some(self.seed),
            self.worst_excess(),
            0.0,
            self.pass(),
            serde_json::to_value(self).expect("serialisable"),
        )
    }
}

/// Vertices whose out-degree tail is sampled: all of them when `n ≤ 32`,
/// otherwise 32 evenly spaced labels.
pub fn monitored_vertices(n: usize) -> Vec<usize> {
    if n <= MONITORED {
        (0..n).collect()
    } else {
        (0..MONITORED).map(|i| i * n / MONITORED).collect()
    }
}

/// Samples `X ⊆ [n]` keeping each element with probability `p` and checks
/// both tail bounds for random subsets, using for each monitored `v` the set
/// `J_v` of smallest labels `j` with `(v)f_j` equal to each out-neighbour.
pub fn random_subset_check(
    rack: &Rack,
    p: f64,
    eps: f64,
    trials: u64,
    seed: u64,
) -> Result<RandomSubsetReport, AnalysisError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(AnalysisError::InvalidParameter {
            name: "p",
            value: p,
        });
    }
    check_unit("eps", eps, true)?;
    let n = rack.order();
    let degrees = rack_out_degrees(rack);
    let watch = monitored_vertices(n);
    let witness_sets: Vec<Vec<usize>> = watch
        .iter()
        .map(|&v| {
            let mut first = vec![usize::MAX; n];
            for j in 0..n {
                let w = rack.op(v, j);
                if w != v && first[w] == usize::MAX {
                    first[w] = j;
                }
            }
            first.into_iter().filter(|&j| j != usize::MAX).collect()
        })
        .collect();
    let size_cut = (1.0 + eps) * n as f64 * p - THRESHOLD_MARGIN;
    let vertex_cut: Vec<f64> = watch
        .iter()
        .map(|&v| (1.0 - eps) * degrees[v] as f64 * p + THRESHOLD_MARGIN)
        .collect();

    struct Acc {
        size: u64,
        deg: Vec<u64>,
        wit: Vec<u64>,
        dominated: u64,
        full: u64,
    }
    let fresh = || Acc {
        size: 0,
        deg: vec![0; watch.len()],
        wit: vec![0; watch.len()],
        dominated: 0,
        full: 0,
    };
    let acc = chunks(trials)
        .into_par_iter()
        .map(|(idx, len)| {
            let mut rng = chunk_rng(seed, idx);
            let mut acc = fresh();
            let mut member = vec![false; n];
            let mut seen = vec![0u64; n];
            let mut stamp = 0u64;
            for _ in 0..len {
                let mut chosen = Vec::new();
                for (j, m) in member.iter_mut().enumerate() {
                    *m = p >= 1.0 || rng.gen_bool(p);
                    if *m {
                        chosen.push(j);
                    }
                }
                acc.size += u64::from(chosen.len() as f64 >= size_cut);
                acc.full += u64::from(p >= 1.0 && chosen.len() != n);
                for (i, &v) in watch.iter().enumerate() {
                    stamp += 1;
                    let mut d = 0usize;
                    for &j in &chosen {
                        let w = rack.op(v, j);
                        if w != v && seen[w] != stamp {
                            seen[w] = stamp;
                            d += 1;
                        }
                    }
                    let hits = witness_sets[i].iter().filter(|&&j| member[j]).count();
                    acc.dominated += u64::from(d < hits);
                    if degrees[v] > 0 {
                        acc.deg[i] += u64::from(d as f64 <= vertex_cut[i]);
                        acc.wit[i] += u64::from(hits as f64 <= vertex_cut[i]);
                    }
                }
            }
            acc
        })
        .reduce(fresh, |mut a, b| {
            a.size += b.size;
            a.dominated += b.dominated;
            a.full += b.full;
            for i in 0..a.deg.len() {
                a.deg[i] += b.deg[i];
                a.wit[i] += b.wit[i];
            }
            a
        });

    let vertices = watch
        .iter()
        .enumerate()
        .filter(|&(_, &v)| degrees[v] > 0)
        .map(|(i, &v)| {
            let delta = degrees[v] as f64 * p;
            let bound = (-eps * eps * delta / 2.0).exp();
            VertexTail {
                v,
                degree: degrees[v],
                delta,
                out_degree: Tail::new(acc.deg[i], trials, bound),
                witness_set: Tail::new(acc.wit[i], trials, bound),
            }
        })
        .collect();
    Ok(RandomSubsetReport {
        n,
        p,
        eps,
        seed,
        size: Tail::new(acc.size, trials, (-eps * eps * n as f64 * p / 3.0).exp()),
        vertices,
        domination_failures: acc.dominated,
        full_sample_failures: acc.full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{conjugation_quandle_of, symmetric_group, trivial_rack};

    #[test]
    fn chernoff_small() {
        let r = chernoff_check(200, 0.3, 0.3, 20_000, 5).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r, chernoff_check(200, 0.3, 0.3, 20_000, 5).unwrap());
        // ε = 0 bounds are 1
        let r = chernoff_check(10, 0.5, 0.0, 100, 1).unwrap();
        assert_eq!((r.upper.bound, r.lower.bound), (1.0, 1.0));
        assert!(chernoff_check(10, 1.5, 0.5, 10, 1).is_err());
    }

    #[test]
    fn trivial_rack_is_vacuous() {
        let r = random_subset_check(&trivial_rack(6), 0.5, 0.5, 1000, 3).unwrap();
        assert!(r.vertices.is_empty());
        assert!(r.pass());
    }

    #[test]
    fn full_sampling() {
        let r = random_subset_check(&trivial_rack(6), 1.0, 0.5, 50, 3).unwrap();
        assert_eq!(r.full_sample_failures, 0);
        assert_eq!(r.size.hits, 0);
    }

    #[test]
    fn conjugation_quandle() {
        let q = conjugation_quandle_of(&symmetric_group(3));
        let r = random_subset_check(&q, 0.5, 0.5, 20_000, 11).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.vertices.len(), 5);
    }
}
