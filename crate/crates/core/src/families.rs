//! Standard rack families and the finite groups they are built from.

use crate::error::{GroupViolation, RackError};
use crate::perm::{all_perms, Perm};
use crate::rack::Rack;

/// A validated finite group on `0..n` with `mul[a * n + b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Checks shape, identity, inverses and associativity.
    pub fn new(rows: &[Vec<usize>]) -> Result<Self, RackError> {
        let n = rows.len();
        if n == 0 {
            return Err(RackError::EmptyTable);
        }
        let mut mul = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(RackError::RowLength {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            if let Some(col) = r.iter().position(|&v| v >= n) {
                return Err(RackError::EntryOutOfRange {
                    row,
                    col,
                    value: r[col],
                    n,
                });
            }
            mul.extend_from_slice(r);
        }
        let m = |a: usize, b: usize| mul[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or(RackError::NotAGroup(GroupViolation::NoIdentity))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or(RackError::NotAGroup(GroupViolation::NoInverse {
                    element: a,
                }))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(RackError::NotAGroup(GroupViolation::NotAssociative {
                            a,
                            b,
                            c,
                        }));
                    }
                }
            }
        }
        Ok(GroupTable {
            n,
            mul,
            identity,
            inverse,
        })
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        Self::new(&rows).expect("built-in group table is valid")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }

    fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .find(|&(a, b)| self.mul(a, b) != self.mul(b, a))
    }
}

/// `Z_n` under addition.
pub fn cyclic_group(n: usize) -> GroupTable {
    GroupTable::from_fn(n, |a, b| (a + b) % n)
}

/// `Z_{m_1} × … × Z_{m_k}` with mixed-radix labels (first factor most significant).
pub fn abelian_group(moduli: &[usize]) -> GroupTable {
    let n: usize = moduli.iter().product();
    let digits = |mut x: usize| {
        let mut d = vec![0; moduli.len()];
        for (i, &m) in moduli.iter().enumerate().rev() {
            d[i] = x % m;
            x /= m;
        }
        d
    };
    GroupTable::from_fn(n, |a, b| {
        let (da, db) = (digits(a), digits(b));
        moduli
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &m)| acc * m + (da[i] + db[i]) % m)
    })
}

/// `Sym(k)` with elements numbered by lexicographic rank; `a·b` applies `a` first.
pub fn symmetric_group(k: usize) -> GroupTable {
    let perms = all_perms(k);
    let index = |p: &Perm| perms.binary_search(p).expect("permutation present");
    GroupTable::from_fn(perms.len(), |a, b| index(&perms[a].then(&perms[b])))
}

/// The dihedral group of order `2m`: element `r^i s^e` is labelled `2i + e`.
pub fn dihedral_group(m: usize) -> GroupTable {
    GroupTable::from_fn(2 * m, |a, b| {
        let (i, e) = (a / 2, a % 2);
        let (j, f) = (b / 2, b % 2);
        // r^i s^e r^j s^f = r^{i ± j} s^{e+f}
        let rot = if e == 0 { (i + j) % m } else { (i + m - j) % m };
        2 * rot + (e ^ f)
    })
}

/// The quaternion group `Q_8`: labels `0..4` are `1, i, j, k` and `4..8` their negatives.
pub fn quaternion_group() -> GroupTable {
    // unit products among 1,i,j,k as (sign, unit)
    const T: [[(u8, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    GroupTable::from_fn(8, |a, b| {
        let (sa, ua) = ((a / 4) as u8, a % 4);
        let (sb, ub) = ((b / 4) as u8, b % 4);
        let (s, u) = T[ua][ub];
        4 * ((sa ^ sb ^ s) as usize) + u
    })
}

/// `x ▷ y = x` for all `x, y`.
pub fn trivial_rack(n: usize) -> Rack {
    assert!(n >= 1, "rack order must be positive");
    Rack::from_maps(vec![Perm::identity(n); n]).expect("trivial rack is a rack")
}

/// `x ▷ y = (x)σ` for a fixed permutation `σ`.
pub fn permutation_rack(sigma: &Perm) -> Rack {
    Rack::from_maps(vec![sigma.clone(); sigma.len()]).expect("permutation rack is a rack")
}

/// `x ▷ y = y⁻¹ x y`.
pub fn conjugation_quandle(group: &[Vec<usize>]) -> Result<Rack, RackError> {
    let g = GroupTable::new(group)?;
    Ok(conjugation_quandle_of(&g))
}

pub fn conjugation_quandle_of(g: &GroupTable) -> Rack {
    let n = g.order();
    let table = (0..n * n).map(|i| {
        let (x, y) = (i / n, i % n);
        g.mul(g.mul(g.inv(y), x), y)
    });
    Rack::from_flat(n, table.collect()).expect("conjugation quandle is a rack")
}

/// `x ▷ y = (x − y)τ + y` over an abelian group with automorphism `τ`.
pub fn alexander_quandle(add: &[Vec<usize>], tau: &Perm) -> Result<Rack, RackError> {
    let g = GroupTable::new(add)?;
    alexander_quandle_of(&g, tau)
}

pub fn alexander_quandle_of(g: &GroupTable, tau: &Perm) -> Result<Rack, RackError> {
    if let Some((a, b)) = g.non_commuting_pair() {
        return Err(RackError::NotAbelian { a, b });
    }
    let n = g.order();
    if tau.len() != n {
        return Err(RackError::NotAutomorphism(format!(
            "map has {} points, group has {n}",
            tau.len()
        )));
    }
    for a in 0..n {
        for b in 0..n {
            if tau.apply(g.mul(a, b)) != g.mul(tau.apply(a), tau.apply(b)) {
                return Err(RackError::NotAutomorphism(format!(
                    "τ({a}+{b}) ≠ τ({a})+τ({b})"
                )));
            }
        }
    }
    let table = (0..n * n).map(|i| {
        let (x, y) = (i / n, i % n);
        g.mul(tau.apply(g.mul(x, g.inv(y))), y)
    });
    Rack::from_flat(n, table.collect())
}

/// The dihedral quandle on `Z_n`: `x ▷ y = 2y − x mod n`.
pub fn dihedral_quandle(n: usize) -> Rack {
    let neg = Perm::from_images((0..n).map(|x| (n - x) % n).collect()).expect("negation");
    alexander_quandle_of(&cyclic_group(n), &neg).expect("negation is an automorphism")
}

/// Multiplication by a unit `u` of `Z_n`, as a permutation.
pub fn unit_multiplier(n: usize, u: usize) -> Option<Perm> {
    Perm::from_images((0..n).map(|x| (x * u) % n).collect())
}

/// Named members of the standard families with order at most `max_n`:
/// trivial, dihedral and other affine quandles, conjugation quandles and
/// permutation racks.
pub fn catalogue(max_n: usize) -> Vec<(String, Rack)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push((format!("trivial({n})"), trivial_rack(n)));
        out.push((format!("dihedral({n})"), dihedral_quandle(n)));
        let cycle: Vec<usize> = (0..n).collect();
        out.push((
            format!("cycle_rack({n})"),
            permutation_rack(&Perm::from_cycles(n, &[&cycle]).unwrap()),
        ));
        if n >= 4 {
            let pairs: Vec<Vec<usize>> = (0..n / 2).map(|i| vec![2 * i, 2 * i + 1]).collect();
            let refs: Vec<&[usize]> = pairs.iter().map(Vec::as_slice).collect();
            out.push((
                format!("pairs_rack({n})"),
                permutation_rack(&Perm::from_cycles(n, &refs).unwrap()),
            ));
        }
        for u in 2..n.saturating_sub(1) {
            if let Some(tau) = unit_multiplier(n, u) {
                let r = alexander_quandle_of(&cyclic_group(n), &tau)
                    .expect("unit multiplication is an automorphism");
                out.push((format!("affine(Z{n}, {u})"), r));
            }
        }
    }
    if max_n >= 4 {
        // nonzero elements of Z2 × Z2 cycled
        let tau = Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap();
        out.push((
            "affine(Z2^2, 3-cycle)".into(),
            alexander_quandle_of(&abelian_group(&[2, 2]), &tau).unwrap(),
        ));
        out.push((
            "conj(D4)".into(),
            conjugation_quandle_of(&dihedral_group(2)),
        ));
    }
    if max_n >= 6 {
        out.push((
            "conj(S3)".into(),
            conjugation_quandle_of(&symmetric_group(3)),
        ));
    }
    if max_n >= 8 {
        // coordinate rotation on Z2^3
        let tau =
            Perm::from_images((0..8).map(|x: usize| ((x << 1) & 6) | (x >> 2)).collect()).unwrap();
        out.push((
            "affine(Z2^3, rotation)".into(),
            alexander_quandle_of(&abelian_group(&[2, 2, 2]), &tau).unwrap(),
        ));
        out.push((
            "conj(D8)".into(),
            conjugation_quandle_of(&dihedral_group(4)),
        ));
        out.push((
            "conj(Q8)".into(),
            conjugation_quandle_of(&quaternion_group()),
        ));
    }
    out
}
