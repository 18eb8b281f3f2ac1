//! Isomorphism testing and lexicographically minimal canonical tables.

use crate::perm::Perm;
use crate::rack::Rack;

/// A bijection `φ` with `(x ▷ y)φ = (x)φ ▷' (y)φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub forward: Perm,
}

impl Isomorphism {
    pub fn verify(&self, from: &Rack, to: &Rack) -> bool {
        let n = from.order();
        let phi = &self.forward;
        n == to.order()
            && phi.len() == n
            && (0..n).all(|x| {
                (0..n).all(|y| phi.apply(from.op(x, y)) == to.op(phi.apply(x), phi.apply(y)))
            })
    }
}

/// Relabel-invariant per-element data used to restrict candidate images.
fn signature(r: &Rack, x: usize) -> (usize, bool, usize, usize) {
    let n = r.order();
    let mut heads = vec![false; n];
    for y in 0..n {
        let v = r.op(x, y);
        if v != x {
            heads[v] = true;
        }
    }
    let out_degree = heads.iter().filter(|&&h| h).count();
    let fixed_of_map = (0..n).filter(|&z| r.op(z, x) == z).count();
    let fixing = (0..n).filter(|&y| r.op(x, y) == x).count();
    (out_degree, r.op(x, x) == x, fixed_of_map, fixing)
}

/// Finds an isomorphism `r1 → r2` by backtracking over images, or `None`.
pub fn find_isomorphism(r1: &Rack, r2: &Rack) -> Option<Isomorphism> {
    let n = r1.order();
    if n != r2.order() {
        return None;
    }
    let s1: Vec<_> = (0..n).map(|x| signature(r1, x)).collect();
    let s2: Vec<_> = (0..n).map(|x| signature(r2, x)).collect();
    let (mut a, mut b) = (s1.clone(), s2.clone());
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(r1, r2, &s1, &s2, 0, &mut phi, &mut used) {
        Some(Isomorphism {
            forward: Perm::from_images_unchecked(phi),
        })
    } else {
        None
    }
}

fn extend(
    r1: &Rack,
    r2: &Rack,
    s1: &[(usize, bool, usize, usize)],
    s2: &[(usize, bool, usize, usize)],
    x: usize,
    phi: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = r1.order();
    if x == n {
        return true;
    }
    for cand in 0..n {
        if used[cand] || s1[x] != s2[cand] {
            continue;
        }
        phi[x] = cand;
        used[cand] = true;
        if consistent(r1, r2, x, phi, used) && extend(r1, r2, s1, s2, x + 1, phi, used) {
            return true;
        }
        used[cand] = false;
        phi[x] = usize::MAX;
    }
    false
}

/// Checks every product involving `x` and an earlier element.
fn consistent(r1: &Rack, r2: &Rack, x: usize, phi: &[usize], used: &[bool]) -> bool {
    for a in 0..=x {
        for (p, q) in [(a, x), (x, a)] {
            let v = r1.op(p, q);
            let target = r2.op(phi[p], phi[q]);
            if phi[v] != usize::MAX {
                if phi[v] != target {
                    return false;
                }
            } else if used[target] {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest row-major table among all relabelings of `r`.
///
/// Intended for `n ≤ 8`. Relabelings are generated as sequences of old elements
/// `σ(0), σ(1), …` receiving the new labels `0, 1, …`; a branch is abandoned as
/// soon as its determined prefix exceeds the best table found so far.
pub fn canonical_form(r: &Rack) -> Vec<usize> {
    let n = r.order();
    let mut search = CanonSearch {
        rack: r,
        n,
        sigma: Vec::with_capacity(n),
        phi: vec![usize::MAX; n],
        best: r.table().to_vec(),
        scratch: vec![0; n * n],
    };
    search.descend();
    search.best
}

pub fn canonical_rows(r: &Rack) -> Vec<Vec<usize>> {
    canonical_form(r)
        .chunks(r.order())
        .map(<[usize]>::to_vec)
        .collect()
}

struct CanonSearch<'a> {
    rack: &'a Rack,
    n: usize,
    sigma: Vec<usize>,
    phi: Vec<usize>,
    best: Vec<usize>,
    scratch: Vec<usize>,
}

enum Prefix {
    Worse,
    Better,
    Undecided,
}

impl CanonSearch<'_> {
    fn compare_prefix(&self) -> Prefix {
        let (n, k) = (self.n, self.sigma.len());
        for pos in 0..n * n {
            let (a, b) = (pos / n, pos % n);
            if a >= k || b >= k {
                return Prefix::Undecided;
            }
            let v = self.rack.op(self.sigma[a], self.sigma[b]);
            let label = self.phi[v];
            if label == usize::MAX {
                // an unassigned element will get a label ≥ k
                return if k > self.best[pos] {
                    Prefix::Worse
                } else {
                    Prefix::Undecided
                };
            }
            match label.cmp(&self.best[pos]) {
                std::cmp::Ordering::Less => return Prefix::Better,
                std::cmp::Ordering::Greater => return Prefix::Worse,
                std::cmp::Ordering::Equal => {}
            }
        }
        Prefix::Undecided
    }

    fn descend(&mut self) {
        let n = self.n;
        if self.sigma.len() == n {
            for pos in 0..n * n {
                let (a, b) = (pos / n, pos % n);
                self.scratch[pos] = self.phi[self.rack.op(self.sigma[a], self.sigma[b])];
            }
            if self.scratch < self.best {
                self.best.copy_from_slice(&self.scratch);
            }
            return;
        }
        for x in 0..n {
            if self.phi[x] != usize::MAX {
                continue;
            }
            self.phi[x] = self.sigma.len();
            self.sigma.push(x);
            if let Prefix::Worse = self.compare_prefix() {
                self.sigma.pop();
                self.phi[x] = usize::MAX;
                continue;
            }
            self.descend();
            self.sigma.pop();
            self.phi[x] = usize::MAX;
        }
    }
}
