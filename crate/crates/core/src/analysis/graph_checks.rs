use super::{chunk_rng, chunks, CheckReport};
use crate::graph::{merged_part_indices, ColoredDigraph, ComponentStructure, EdgeSet, UnionFind};
use crate::perm::Perm;
use crate::rack::Rack;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

fn components_with(n: usize, sets: &[&EdgeSet]) -> ComponentStructure {
    let mut uf = UnionFind::new(n);
    for set in sets {
        for &(a, b) in set.edges() {
            uf.union(a, b);
        }
    }
    uf.structure()
}

fn cp_with(n: usize, sets: &[&EdgeSet]) -> usize {
    components_with(n, sets).cp()
}

fn random_edges(rng: &mut ChaCha8Rng, n: usize, max: usize) -> EdgeSet {
    let count = rng.gen_range(0..=max);
    let mut edges = Vec::with_capacity(count);
    while edges.len() < count {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((a, b));
        }
    }
    EdgeSet::new(edges).expect("loopless")
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MergeCalculusCounts {
    pub instances: u64,
    pub supermodularity_violations: u64,
    pub stability_checked: u64,
    pub stability_violations: u64,
    pub merge_bound_violations: u64,
}

impl MergeCalculusCounts {
    fn add(mut self, o: Self) -> Self {
        self.instances += o.instances;
        self.supermodularity_violations += o.supermodularity_violations;
        self.stability_checked += o.stability_checked;
        self.stability_violations += o.stability_violations;
        self.merge_bound_violations += o.merge_bound_violations;
        self
    }

    pub fn violations(&self) -> u64 {
        self.supermodularity_violations + self.stability_violations + self.merge_bound_violations
    }
}

/// One random instance `(G, E₁, E₂, e)` on `n` vertices.
fn merge_instance(rng: &mut ChaCha8Rng, n: usize) -> MergeCalculusCounts {
    let mut c = MergeCalculusCounts {
        instances: 1,
        ..Default::default()
    };
    let g = random_edges(rng, n, n);
    let e1 = random_edges(rng, n, n / 2 + 1);
    let e2 = random_edges(rng, n, n / 2 + 1);
    // cp(G) − cp(G + E₂) ≥ cp(G + E₁) − cp(G + E₁ + E₂)
    let lhs = cp_with(n, &[&g]) - cp_with(n, &[&g, &e2]);
    let rhs = cp_with(n, &[&g, &e1]) - cp_with(n, &[&g, &e1, &e2]);
    c.supermodularity_violations += u64::from(lhs < rhs);

    let comps = components_with(n, &[&g]);
    let e = random_edges(rng, n, 1);
    let joined = e1.uplus(&e);
    if cp_with(n, &[&g, &joined]) == cp_with(n, &[&g, &e1]) {
        c.stability_checked += 1;
        c.stability_violations +=
            u64::from(merged_part_indices(&comps, &joined) != merged_part_indices(&comps, &e1));
    }

    for set in [&e1, &e2, &joined] {
        let drop = comps.cp() - cp_with(n, &[&g, set]);
        c.merge_bound_violations += u64::from(merged_part_indices(&comps, set).len() > 2 * drop);
    }
    c
}

/// Random multigraphs on at most `max_n` vertices checked for supermodularity of
/// the component count, stability of `M` under non-merging edges and
/// `|M(G, E)| ≤ 2 (cp(G) − cp(G + E))`.
pub fn merge_calculus_check(instances: u64, max_n: usize, seed: u64) -> CheckReport {
    let max_n = max_n.max(2);
    let counts = chunks(instances)
        .into_par_iter()
        .map(|(idx, len)| {
            let mut rng = chunk_rng(seed, idx);
            (0..len).fold(MergeCalculusCounts::default(), |acc, _| {
                let n = rng.gen_range(2..=max_n);
                acc.add(merge_instance(&mut rng, n))
            })
        })
        .reduce(MergeCalculusCounts::default, MergeCalculusCounts::add);
    CheckReport::new(
        "merge_calculus",
        json!({ "instances": instances, "max_n": max_n }),
        Some(seed),
        counts.violations() as f64,
        0.0,
        counts.violations() == 0,
        serde_json::to_value(&counts).expect("serialisable"),
    )
}

/// Orbits of `⟨Σ⟩` by closing each point under the generators.
pub fn orbit_partition(n: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in gens {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("shuffle is a bijection")
}

/// A permutation of `n` points that is likely to have several cycles.
fn sparse_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    for _ in 0..rng.gen_range(0..=2) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        images.swap(a, b);
    }
    Perm::from_images(images).expect("product of transpositions")
}

/// Components of `G_Σ` against orbits of `⟨Σ⟩` for random families.
pub fn orbit_check(families: u64, max_n: usize, seed: u64) -> CheckReport {
    let max_n = max_n.max(1);
    let mismatches: u64 = chunks(families)
        .into_par_iter()
        .map(|(idx, len)| {
            let mut rng = chunk_rng(seed, idx);
            let mut bad = 0;
            for _ in 0..len {
                let n = rng.gen_range(1..=max_n);
                let k = rng.gen_range(0..=3);
                let gens: Vec<Perm> = (0..k)
                    .map(|_| {
                        if rng.gen_bool(0.5) {
                            random_perm(&mut rng, n)
                        } else {
                            sparse_perm(&mut rng, n)
                        }
                    })
                    .collect();
                let sigma: Vec<(usize, Perm)> = gens.iter().cloned().enumerate().collect();
                let g = ColoredDigraph::build(n, &sigma).expect("permutations give valid graphs");
                bad += u64::from(g.components().parts() != orbit_partition(n, &gens).as_slice());
            }
            bad
        })
        .sum();
    CheckReport::new(
        "orbit_equality",
        json!({ "families": families, "max_n": max_n }),
        Some(seed),
        mismatches as f64,
        0.0,
        mismatches == 0,
        json!({ "mismatches": mismatches }),
    )
}

/// Components of `G_S` whose vertices do not share one out-degree `d⁺_S`.
pub fn irregular_components(rack: &Rack, subset: &[usize]) -> Vec<Vec<usize>> {
    let g = ColoredDigraph::from_rack(rack, subset);
    let deg = g.reduced();
    g.components()
        .parts()
        .iter()
        .filter(|part| {
            part.iter()
                .any(|&v| deg.successors(v).len() != deg.successors(part[0]).len())
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{conjugation_quandle_of, dihedral_quandle, symmetric_group};

    #[test]
    fn merge_calculus_small() {
        let r = merge_calculus_check(2000, 8, 1);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.detail["instances"], 2000);
        assert_eq!(r, merge_calculus_check(2000, 8, 1));
    }

    #[test]
    fn orbits() {
        let c = Perm::from_cycles(5, &[&[0, 1], &[3, 4]]).unwrap();
        assert_eq!(
            orbit_partition(5, &[c]),
            vec![vec![0, 1], vec![2], vec![3, 4]]
        );
        assert!(orbit_check(500, 10, 3).pass);
    }

    #[test]
    fn regularity() {
        let q = conjugation_quandle_of(&symmetric_group(3));
        assert!(irregular_components(&q, &[0, 1, 2, 3, 4, 5]).is_empty());
        assert!(irregular_components(&dihedral_quandle(6), &[0, 2, 4]).is_empty());
    }
}
