//! Edge-coloured directed multigraphs built from families of permutations, and
//! the component calculus used to choose which maps to reveal.
//!
//! Components are always weak components (edge orientation ignored). Parts are
//! reported in increasing order of their minimum vertex, each part sorted.

use crate::perm::Perm;
use crate::rack::Rack;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("colour {color}: map is not a permutation of 0..{n}")]
    NotAPermutation { color: usize, n: usize },
    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("colour {color} has two edges out of vertex {vertex}")]
    DuplicateTail { vertex: usize, color: usize },
    #[error("colour {color} has two edges into vertex {vertex}")]
    DuplicateHead { vertex: usize, color: usize },
}

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if two different sets were joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn count(&self) -> usize {
        self.sets
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn structure(&mut self) -> ComponentStructure {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|v| self.find(v)).collect();
        ComponentStructure::from_labels(n, &roots)
    }
}

/// A partition of `0..n` into component vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentStructure {
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
    /// `eta[q]` = number of vertices lying in components of size exactly `q`.
    eta: Vec<usize>,
}

impl ComponentStructure {
    /// Groups vertices by an arbitrary per-vertex label.
    pub fn from_labels(n: usize, labels: &[usize]) -> Self {
        let mut index_of_label = std::collections::HashMap::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut part_of = vec![0; n];
        for v in 0..n {
            let idx = *index_of_label.entry(labels[v]).or_insert_with(|| {
                parts.push(Vec::new());
                parts.len() - 1
            });
            parts[idx].push(v);
            part_of[v] = idx;
        }
        // first occurrence order is already increasing minimum vertex
        let mut eta = vec![0; n + 1];
        for p in &parts {
            eta[p.len()] += p.len();
        }
        ComponentStructure {
            parts,
            part_of,
            eta,
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Index (into [`parts`](Self::parts)) of the component containing `v`.
    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn cp(&self) -> usize {
        self.parts.len()
    }

    /// The size histogram, indexed `1..=n` (index 0 is always zero).
    pub fn eta(&self) -> &[usize] {
        &self.eta
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }
}

/// A multiset of directed, loopless vertex pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet(Vec<(usize, usize)>);

impl EdgeSet {
    pub fn new(edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if let Some(&(v, _)) = edges.iter().find(|(a, b)| a == b) {
            return Err(GraphError::Loop { vertex: v });
        }
        Ok(EdgeSet(edges))
    }

    /// The non-loop edges `x → (x)σ`.
    pub fn of_perm(sigma: &Perm) -> Self {
        EdgeSet(
            (0..sigma.len())
                .map(|x| (x, sigma.apply(x)))
                .filter(|(a, b)| a != b)
                .collect(),
        )
    }

    /// Multiset sum `self ⊎ other`.
    pub fn uplus(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredEdge {
    pub from: usize,
    pub to: usize,
    pub color: usize,
}

/// Loopless directed multigraph on `0..n` in which each colour class is a partial injection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredDigraph {
    n: usize,
    colors: Vec<usize>,
    edges: Vec<ColoredEdge>,
}

impl ColoredDigraph {
    /// Validates looplessness and the per-colour functional condition.
    pub fn new(
        n: usize,
        mut colors: Vec<usize>,
        mut edges: Vec<ColoredEdge>,
    ) -> Result<Self, GraphError> {
        let mut tails = std::collections::HashSet::new();
        let mut heads = std::collections::HashSet::new();
        for e in &edges {
            for v in [e.from, e.to] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if e.from == e.to {
                return Err(GraphError::Loop { vertex: e.from });
            }
            if !tails.insert((e.from, e.color)) {
                return Err(GraphError::DuplicateTail {
                    vertex: e.from,
                    color: e.color,
                });
            }
            if !heads.insert((e.to, e.color)) {
                return Err(GraphError::DuplicateHead {
                    vertex: e.to,
                    color: e.color,
                });
            }
        }
        colors.extend(edges.iter().map(|e| e.color));
        colors.sort_unstable();
        colors.dedup();
        edges.sort_unstable_by_key(|e| (e.color, e.from));
        Ok(ColoredDigraph { n, colors, edges })
    }

    /// `G_Σ`: an edge `u → v` of colour `c` whenever `u ≠ v` and `(u)σ_c = v`.
    pub fn build(n: usize, sigma: &[(usize, Perm)]) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (color, p) in sigma {
            if p.len() != n {
                return Err(GraphError::NotAPermutation { color: *color, n });
            }
            edges.extend((0..n).filter(|&u| p.apply(u) != u).map(|u| ColoredEdge {
                from: u,
                to: p.apply(u),
                color: *color,
            }));
        }
        Self::new(n, sigma.iter().map(|(c, _)| *c).collect(), edges)
    }

    /// `G_S` for a set `S` of rack elements, coloured by the elements themselves.
    pub fn from_rack(rack: &Rack, subset: &[usize]) -> Self {
        let n = rack.order();
        let mut colors = subset.to_vec();
        colors.sort_unstable();
        colors.dedup();
        let mut edges = Vec::new();
        for &c in &colors {
            let f = rack.map(c);
            edges.extend((0..n).filter(|&u| f.apply(u) != u).map(|u| ColoredEdge {
                from: u,
                to: f.apply(u),
                color: c,
            }));
        }
        ColoredDigraph { n, colors, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    /// `G⁰`: one edge `u → v` whenever some colour has it.
    pub fn reduced(&self) -> SimpleDigraph {
        let mut succ = vec![Vec::new(); self.n];
        for e in &self.edges {
            succ[e.from].push(e.to);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        SimpleDigraph { succ }
    }

    fn union_find(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.from, e.to);
        }
        uf
    }

    pub fn components(&self) -> ComponentStructure {
        self.union_find().structure()
    }

    pub fn cp(&self) -> usize {
        self.union_find().count()
    }

    /// Number of distinct heads of edges leaving `v`.
    pub fn out_degree(&self, v: usize) -> usize {
        let mut heads: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.from == v)
            .map(|e| e.to)
            .collect();
        heads.sort_unstable();
        heads.dedup();
        heads.len()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.reduced().succ.iter().map(Vec::len).collect()
    }

    /// BFS tree of directed edges from `root`: `parent[u] = Some((w, colour))` for
    /// every reached `u ≠ root` with `w →colour→ u`.
    pub fn bfs_tree(&self, root: usize) -> Vec<Option<(usize, usize)>> {
        let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n];
        for e in &self.edges {
            out[e.from].push((e.to, e.color));
        }
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(w) = queue.pop_front() {
            for &(u, c) in &out[w] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((w, c));
                    queue.push_back(u);
                }
            }
        }
        parent
    }

    /// Colours along a shortest directed path `u → … → v`.
    pub fn directed_path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        if u == v {
            return Some(Vec::new());
        }
        let parent = self.bfs_tree(u);
        let mut colors = Vec::new();
        let mut cur = v;
        while cur != u {
            let (w, c) = parent[cur]?;
            colors.push(c);
            cur = w;
        }
        colors.reverse();
        Some(colors)
    }

    pub fn directed_path_exists(&self, u: usize, v: usize) -> bool {
        self.directed_path(u, v).is_some()
    }

    /// `cp(G + E)`, the component count after adding `extra` as uncoloured edges.
    pub fn cp_with(&self, extra: &EdgeSet) -> usize {
        let mut uf = self.union_find();
        for &(a, b) in extra.edges() {
            uf.union(a, b);
        }
        uf.count()
    }

    /// `M(G, E)`: the components of `G` having an `E`-edge to their complement.
    pub fn merged_components(&self, extra: &EdgeSet) -> Vec<Vec<usize>> {
        merged_components(&self.components(), extra)
    }

    /// DOT rendering, one edge per coloured edge.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                e.from, e.to, e.color
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// `M(G, E)` given the components of `G`.
pub fn merged_components(comps: &ComponentStructure, extra: &EdgeSet) -> Vec<Vec<usize>> {
    merged_part_indices(comps, extra)
        .into_iter()
        .map(|i| comps.parts()[i].clone())
        .collect()
}

/// Indices of merged parts, increasing.
pub fn merged_part_indices(comps: &ComponentStructure, extra: &EdgeSet) -> Vec<usize> {
    let mut merged = vec![false; comps.cp()];
    for &(a, b) in extra.edges() {
        let (pa, pb) = (comps.part_of(a), comps.part_of(b));
        if pa != pb {
            merged[pa] = true;
            merged[pb] = true;
        }
    }
    (0..comps.cp()).filter(|&i| merged[i]).collect()
}

/// Simple directed graph with sorted successor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleDigraph {
    succ: Vec<Vec<usize>>,
}

impl SimpleDigraph {
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
            .collect()
    }
}

/// Out-degree of every vertex in `G⁰_R`.
pub fn rack_out_degrees(rack: &Rack) -> Vec<usize> {
    subset_out_degrees(rack, &(0..rack.order()).collect::<Vec<_>>())
}

/// `d⁺_S(v)` for every `v`: distinct non-fixed images of `v` under `f_s`, `s ∈ S`.
pub fn subset_out_degrees(rack: &Rack, subset: &[usize]) -> Vec<usize> {
    let n = rack.order();
    let mut stamp = vec![usize::MAX; n];
    (0..n)
        .map(|v| {
            let mut d = 0;
            for &s in subset {
                let w = rack.op(v, s);
                if w != v && stamp[w] != v {
                    stamp[w] = v;
                    d += 1;
                }
            }
            d
        })
        .collect()
}
