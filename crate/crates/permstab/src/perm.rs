//! Permutations of `{0, .., n-1}` and the normalized Hamming distance.

use crate::ratio::{rat_int, Rat};
use num_integer::Integer;

/// A permutation stored as its image list: `map[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.map)
    }
}

impl Perm {
    /// Validates that `map` is a bijection of `{0, .., n-1}`.
    pub fn new(map: Vec<usize>) -> Option<Perm> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm { map })
    }

    pub fn identity(n: usize) -> Perm {
        Perm { map: (0..n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        assert!(a < n && b < n);
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Perm { map }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { map: other.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Perm { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut out = Perm::identity(self.degree());
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    /// Multiplicative order: the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut ord: usize = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.map[x];
                len += 1;
            }
            ord = ord.lcm(&len);
        }
        ord
    }
}

/// Number of points where `a` and `b` disagree.
pub fn hamming(a: &Perm, b: &Perm) -> usize {
    assert_eq!(a.degree(), b.degree(), "degree mismatch");
    a.images().iter().zip(b.images()).filter(|(x, y)| x != y).count()
}

/// Normalized Hamming distance `|{x : a(x) != b(x)}| / n`, an exact rational.
///
/// This metric is bi-invariant: composing both arguments with the same
/// permutation on either side leaves the distance unchanged.
pub fn normalized_hamming(a: &Perm, b: &Perm) -> Rat {
    let n = a.degree();
    assert!(n > 0, "empty permutation has no normalized distance");
    rat_int(hamming(a, b) as i64) / rat_int(n as i64)
}

/// A uniformly random permutation of `{0, .., n-1}`.
pub fn random_perm<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
    use rand::seq::SliceRandom;
    let mut map: Vec<usize> = (0..n).collect();
    map.shuffle(rng);
    Perm { map }
}

/// All permutations of `{0, .., n-1}` in lexicographic order of image lists.
/// Intended for small `n` (oracles and brute-force enumeration).
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if current.len() == n {
            out.push(Perm { map: current.clone() });
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                current.push(x);
                rec(n, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::new(vec![0, 0]).is_none());
        assert!(Perm::new(vec![0, 2]).is_none());
        assert!(Perm::new(vec![1, 0, 2]).is_some());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Perm::new(vec![1, 2, 0]).unwrap();
        let b = Perm::new(vec![0, 2, 1]).unwrap();
        // (a ∘ b)(1) = a(b(1)) = a(2) = 0
        assert_eq!(a.compose(&b).apply(1), 0);
    }

    #[test]
    fn inverse_and_order() {
        let c = Perm::new(vec![1, 2, 3, 0]).unwrap();
        assert!(c.compose(&c.inverse()).is_identity());
        assert_eq!(c.order(), 4);
        assert_eq!(c.pow(4), Perm::identity(4));
        let t = Perm::transposition(5, 1, 3);
        assert_eq!(t.order(), 2);
        assert_eq!(Perm::identity(6).order(), 1);
    }

    #[test]
    fn normalized_distance_values() {
        let id = Perm::identity(4);
        let t = Perm::transposition(4, 0, 1);
        assert_eq!(normalized_hamming(&id, &id), rat(0, 1));
        assert_eq!(normalized_hamming(&id, &t), rat(1, 2));
    }

    #[test]
    fn all_perms_counts() {
        assert_eq!(all_perms(1).len(), 1);
        assert_eq!(all_perms(3).len(), 6);
        assert_eq!(all_perms(4).len(), 24);
        // lexicographically first is the identity
        assert!(all_perms(4)[0].is_identity());
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn distance_is_bi_invariant(
            a in perm_strategy(8), b in perm_strategy(8), c in perm_strategy(8)
        ) {
            let d = normalized_hamming(&a, &b);
            // left multiplication
            prop_assert_eq!(normalized_hamming(&c.compose(&a), &c.compose(&b)), d.clone());
            // right multiplication
            prop_assert_eq!(normalized_hamming(&a.compose(&c), &b.compose(&c)), d);
        }

        #[test]
        fn distance_is_a_metric(
            a in perm_strategy(7), b in perm_strategy(7), c in perm_strategy(7)
        ) {
            let ab = normalized_hamming(&a, &b);
            let ba = normalized_hamming(&b, &a);
            prop_assert_eq!(ab.clone(), ba);
            let ac = normalized_hamming(&a, &c);
            let cb = normalized_hamming(&c, &b);
            prop_assert!(ab <= ac + cb);
            prop_assert_eq!(normalized_hamming(&a, &a), rat(0, 1));
        }
    }
}
