//! Permutations of `0..n`, written on the right: `(x)f` is `f.apply(x)` and
//! `f.then(g)` is the map `x ↦ ((x)f)g`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Wraps an image vector, returning `None` unless it is a bijection on `0..len`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        if is_bijection(&images) {
            Some(Perm(images))
        } else {
            None
        }
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(is_bijection(&images));
        Perm(images)
    }

    /// Builds a permutation from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n || seen[x] {
                    return None;
                }
                seen[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Some(Perm(images))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Perm(inv)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Self {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Perm) -> Self {
        // (x) g⁻¹ f g: x = (a)g  ↦  ((a)f)g
        let mut out = vec![0; self.0.len()];
        for a in 0..self.0.len() {
            out[g.0[a]] = g.0[self.0[a]];
        }
        Perm(out)
    }

    /// Rank of the permutation among all `n!` in lexicographic order (Lehmer code).
    pub fn lehmer_rank(&self) -> BigUint {
        let n = self.0.len();
        let mut used = vec![false; n];
        let mut rank = BigUint::zero();
        for (i, &x) in self.0.iter().enumerate() {
            let smaller_unused = (0..x).filter(|&y| !used[y]).count();
            used[x] = true;
            rank = rank * (n - i) + smaller_unused;
        }
        rank
    }

    /// Inverse of [`Perm::lehmer_rank`]; `None` if `rank >= n!`.
    pub fn from_lehmer_rank(n: usize, rank: &BigUint) -> Option<Self> {
        let mut digits = vec![0usize; n];
        let mut r = rank.clone();
        for i in (0..n).rev() {
            let radix = n - i;
            digits[i] = (&r % radix).to_usize()?;
            r /= radix;
        }
        if !r.is_zero() {
            return None;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        Some(Perm(digits.into_iter().map(|d| pool.remove(d)).collect()))
    }

    /// Advances to the lexicographically next permutation; returns `false` after the last one.
    pub fn next_lex(&mut self) -> bool {
        let v = &mut self.0;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

pub fn is_bijection(images: &[usize]) -> bool {
    let n = images.len();
    let mut seen = vec![false; n];
    for &y in images {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut p = Perm::identity(n);
    loop {
        out.push(p.clone());
        if !p.next_lex() {
            break;
        }
    }
    out
}

/// Number of bits needed to store a value in `0..k` (`⌈log₂ k⌉`, zero for `k ≤ 1`).
pub fn bit_width(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

/// `⌈log₂ n!⌉`, the width of a stored Lehmer rank.
pub fn factorial_bits(n: usize) -> u64 {
    let mut f = BigUint::from(1u32);
    for k in 2..=n {
        f *= k;
    }
    big_bit_width(&f)
}

/// Number of bits needed to store a value in `0..k` for a big `k`.
pub fn big_bit_width(k: &BigUint) -> u64 {
    if *k <= BigUint::from(1u32) {
        0
    } else {
        (k - 1u32).bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        assert_eq!(bit_width(1), 0);
        assert_eq!(bit_width(2), 1);
        assert_eq!(bit_width(3), 2);
        assert_eq!(bit_width(4), 2);
        assert_eq!(bit_width(5), 3);
        assert_eq!(factorial_bits(1), 0);
        assert_eq!(factorial_bits(3), 3);
        assert_eq!(factorial_bits(4), 5);
    }

    #[test]
    fn lex_order_matches_lehmer_rank() {
        for (i, p) in all_perms(4).iter().enumerate() {
            assert_eq!(p.lehmer_rank(), BigUint::from(i));
        }
        assert!(Perm::from_lehmer_rank(3, &BigUint::from(6u32)).is_none());
    }

    #[test]
    fn conjugation_matches_composition() {
        let f = Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let g = Perm::from_cycles(5, &[&[1, 4], &[2, 3]]).unwrap();
        assert_eq!(f.conjugate_by(&g), g.inverse().then(&f).then(&g));
    }

    proptest! {
        #[test]
        fn lehmer_round_trip(v in Just((0..9usize).collect::<Vec<_>>()).prop_shuffle()) {
            let p = Perm::from_images(v).unwrap();
            let r = p.lehmer_rank();
            prop_assert_eq!(Perm::from_lehmer_rank(9, &r), Some(p));
        }
    }
}
