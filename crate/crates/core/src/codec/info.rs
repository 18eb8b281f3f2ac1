//! The revealed information about a rack: the degree split, the greedy set `T`,
//! the restrictions to `T`, the maps indexed by `T⁺`, and the merge lists with
//! their restrictions.

use super::{CodecError, CodecParams};
use crate::graph::{
    merged_part_indices, rack_out_degrees, ColoredDigraph, ComponentStructure, EdgeSet, UnionFind,
};
use crate::perm::Perm;
use crate::rack::Rack;

/// A map defined on a sorted domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    pub domain: Vec<usize>,
    pub images: Vec<usize>,
}

impl PartialMap {
    pub fn restrict(f: &Perm, domain: &[usize]) -> Self {
        PartialMap {
            domain: domain.to_vec(),
            images: domain.iter().map(|&x| f.apply(x)).collect(),
        }
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.domain.binary_search(&x).ok().map(|i| self.images[i])
    }
}

/// `(S_low, S_high)`: vertices of out-degree `≤ delta` in `G⁰_R` and the rest.
pub fn degree_split(rack: &Rack, delta: usize) -> (Vec<usize>, Vec<usize>) {
    let deg = rack_out_degrees(rack);
    (0..rack.order()).partition(|&v| deg[v] <= delta)
}

/// The full greedy ordering of `candidates` together with `cp(H_i)` for
/// `i = 0..=len`, where `H_i` is the graph of the first `i` chosen maps.
///
/// Each step picks the candidate minimising the component count of the graph
/// with its map added; ties go to the smallest label.
pub fn greedy_order(rack: &Rack, candidates: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = rack.order();
    let mut uf = UnionFind::new(n);
    let mut remaining: Vec<usize> = candidates.to_vec();
    remaining.sort_unstable();
    let mut order = Vec::with_capacity(remaining.len());
    let mut cps = vec![uf.count()];
    while !remaining.is_empty() {
        let mut best: Option<(usize, usize, UnionFind)> = None;
        for (idx, &v) in remaining.iter().enumerate() {
            let mut trial = uf.clone();
            let f = rack.map(v);
            for x in 0..n {
                trial.union(x, f.apply(x));
            }
            if best.as_ref().is_none_or(|(_, c, _)| trial.count() < *c) {
                best = Some((idx, trial.count(), trial));
            }
        }
        let (idx, cp, next) = best.expect("remaining is non-empty");
        order.push(remaining.remove(idx));
        cps.push(cp);
        uf = next;
    }
    (order, cps)
}

/// `T(R)`: the first `min(cap_l, |S_low|)` vertices of the greedy order of `S_low`.
pub fn greedy_t(rack: &Rack, delta: usize, cap_l: usize) -> Vec<usize> {
    let (s_low, _) = degree_split(rack, delta);
    let (mut order, _) = greedy_order(rack, &s_low);
    order.truncate(cap_l);
    order
}

/// The seven revealed entries. Every "arbitrary order" is ascending vertex
/// order except `t_set`, which keeps the greedy order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoTuple {
    pub n: usize,
    /// `S_≤Δ`, sorted.
    pub s_low: Vec<usize>,
    /// `f_j` for `j ∈ S_>Δ`, ascending.
    pub high_maps: Vec<(usize, Perm)>,
    /// `T`, in greedy order.
    pub t_set: Vec<usize>,
    /// `f_j|_T` for every `j ∈ 0..n`.
    pub t_restrictions: Vec<PartialMap>,
    /// `f_k` for `k ∈ T⁺ = T ∪ Γ⁺(T)`, ascending.
    pub t_plus_maps: Vec<(usize, Perm)>,
    /// `M_j` for `j ∈ S_≤Δ ∖ T`, ascending, as component vertex sets.
    pub merge_lists: Vec<(usize, Vec<Vec<usize>>)>,
    /// `f_j|_{Y_j}` for `j ∈ S_≤Δ ∖ T`, ascending.
    pub merged_restrictions: Vec<(usize, PartialMap)>,
}

/// Sets and graphs that follow from the first five entries.
#[derive(Debug, Clone)]
pub(crate) struct Derived {
    pub s_high: Vec<usize>,
    pub t_sorted: Vec<usize>,
    pub t_plus: Vec<usize>,
    pub g_t: ColoredDigraph,
    pub comps: ComponentStructure,
}

impl Derived {
    /// Index sets of parts not merged by colour `j`, given `M_j` as part indices.
    pub fn unmerged(&self, merged: &[usize]) -> Vec<usize> {
        (0..self.comps.cp())
            .filter(|i| merged.binary_search(i).is_err())
            .collect()
    }
}

/// `T ∪ {(t)f_j ≠ t}` read off the restrictions to `T`.
pub(crate) fn t_plus_from_restrictions(
    n: usize,
    t_set: &[usize],
    restrictions: &[PartialMap],
) -> Vec<usize> {
    let mut member = vec![false; n];
    for &t in t_set {
        member[t] = true;
    }
    for r in restrictions {
        for (&t, &img) in r.domain.iter().zip(&r.images) {
            if img != t {
                member[img] = true;
            }
        }
    }
    (0..n).filter(|&v| member[v]).collect()
}

impl InfoTuple {
    pub fn t_sorted(&self) -> Vec<usize> {
        let mut t = self.t_set.clone();
        t.sort_unstable();
        t
    }

    /// `T⁺`, ascending.
    pub fn t_plus(&self) -> Vec<usize> {
        t_plus_from_restrictions(self.n, &self.t_set, &self.t_restrictions)
    }

    pub fn s_high(&self) -> Vec<usize> {
        self.high_maps.iter().map(|(j, _)| *j).collect()
    }

    /// `G_T` coloured by the elements of `T`.
    pub fn g_t(&self) -> Result<ColoredDigraph, CodecError> {
        let mut sigma = Vec::with_capacity(self.t_set.len());
        for t in self.t_sorted() {
            let f = self
                .t_plus_maps
                .iter()
                .find(|(k, _)| *k == t)
                .ok_or_else(|| {
                    CodecError::CorruptStream(format!("map of T element {t} missing"))
                })?;
            sigma.push((t, f.1.clone()));
        }
        ColoredDigraph::build(self.n, &sigma).map_err(|e| CodecError::CorruptStream(e.to_string()))
    }

    pub(crate) fn derive(&self) -> Result<Derived, CodecError> {
        let g_t = self.g_t()?;
        let comps = g_t.components();
        Ok(Derived {
            s_high: self.s_high(),
            t_sorted: self.t_sorted(),
            t_plus: self.t_plus(),
            g_t,
            comps,
        })
    }

    /// `M_j` as part indices into the components of `G_T`, for `j ∈ S_≤Δ ∖ T`.
    pub(crate) fn merged_indices(
        &self,
        comps: &ComponentStructure,
        j: usize,
    ) -> Option<Vec<usize>> {
        let (_, parts) = self.merge_lists.iter().find(|(k, _)| *k == j)?;
        Some(parts.iter().map(|p| comps.part_of(p[0])).collect())
    }

    pub fn merge_list(&self, j: usize) -> Option<&[Vec<usize>]> {
        self.merge_lists
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, m)| m.as_slice())
    }

    pub fn merged_restriction(&self, j: usize) -> Option<&PartialMap> {
        self.merged_restrictions
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, m)| m)
    }
}

/// Collects the information tuple of `rack`.
///
/// Every component of `G_T` outside `M_j` is checked to be setwise fixed by
/// `f_j`, for every `j`.
pub fn build_info(rack: &Rack, params: &CodecParams) -> Result<InfoTuple, CodecError> {
    let n = rack.order();
    params.validate(n)?;
    let (s_low, s_high) = degree_split(rack, params.delta);
    let (mut t_set, _) = greedy_order(rack, &s_low);
    t_set.truncate(params.cap_l);
    let mut t_sorted = t_set.clone();
    t_sorted.sort_unstable();

    let high_maps = s_high.iter().map(|&j| (j, rack.map(j).clone())).collect();
    let t_restrictions: Vec<PartialMap> = (0..n)
        .map(|j| PartialMap::restrict(rack.map(j), &t_sorted))
        .collect();
    let t_plus = t_plus_from_restrictions(n, &t_set, &t_restrictions);
    let t_plus_maps = t_plus.iter().map(|&k| (k, rack.map(k).clone())).collect();

    let g_t = ColoredDigraph::from_rack(rack, &t_set);
    let comps = g_t.components();
    check_invariance(rack, &comps)?;

    let mut merge_lists = Vec::new();
    let mut merged_restrictions = Vec::new();
    for &j in s_low.iter().filter(|j| t_sorted.binary_search(j).is_err()) {
        let merged = merged_part_indices(&comps, &EdgeSet::of_perm(rack.map(j)));
        let mut y: Vec<usize> = merged
            .iter()
            .flat_map(|&i| comps.parts()[i].iter().copied())
            .collect();
        y.sort_unstable();
        merge_lists.push((
            j,
            merged.iter().map(|&i| comps.parts()[i].clone()).collect(),
        ));
        merged_restrictions.push((j, PartialMap::restrict(rack.map(j), &y)));
    }

    Ok(InfoTuple {
        n,
        s_low,
        high_maps,
        t_set,
        t_restrictions,
        t_plus_maps,
        merge_lists,
        merged_restrictions,
    })
}

/// Every component of `G_T` not merged by the colour-`j` edges is `f_j`-invariant.
pub fn check_invariance(rack: &Rack, comps: &ComponentStructure) -> Result<usize, CodecError> {
    let mut checked = 0;
    for j in 0..rack.order() {
        let f = rack.map(j);
        let merged = merged_part_indices(comps, &EdgeSet::of_perm(f));
        for (i, part) in comps.parts().iter().enumerate() {
            if merged.binary_search(&i).is_ok() {
                continue;
            }
            checked += 1;
            if part.iter().any(|&x| comps.part_of(f.apply(x)) != i) {
                return Err(CodecError::Internal(format!(
                    "component with minimum {} is unmerged by colour {j} but not invariant",
                    part[0]
                )));
            }
        }
    }
    Ok(checked)
}
