//! Subsets of boxes as 64-bit masks.

use std::cmp::Ordering;
use std::fmt;

/// Largest number of boxes a [`BoxSet`] can address.
pub const MAX_BOXES: usize = 64;

/// A set of 0-based box indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxSet(u64);

impl BoxSet {
    pub const EMPTY: BoxSet = BoxSet(0);

    pub fn from_bits(bits: u64) -> Self {
        BoxSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_BOXES);
        BoxSet(1 << i)
    }

    /// All boxes `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= MAX_BOXES {
            BoxSet(u64::MAX)
        } else {
            BoxSet((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_BOXES && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn with(self, i: usize) -> Self {
        BoxSet(self.0 | 1 << i)
    }

    pub fn union(self, other: BoxSet) -> Self {
        BoxSet(self.0 | other.0)
    }

    pub fn intersection(self, other: BoxSet) -> Self {
        BoxSet(self.0 & other.0)
    }

    pub fn difference(self, other: BoxSet) -> Self {
        BoxSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: BoxSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: BoxSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement within `0..n`.
    pub fn complement(self, n: usize) -> Self {
        BoxSet(!self.0 & BoxSet::full(n).0)
    }

    /// Highest index plus one, or zero for the empty set.
    pub fn span(self) -> usize {
        MAX_BOXES - self.0.leading_zeros() as usize
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic order on the ascending index lists, a proper prefix first.
    pub fn lex_cmp(self, other: BoxSet) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Re-labels members through `map`: member `i` becomes `map[i]`.
    pub fn map_through(self, map: &[usize]) -> Self {
        self.iter().map(|i| map[i]).collect()
    }
}

impl FromIterator<usize> for BoxSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = BoxSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (j, i) in self.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    KSubsets {
        n,
        idx: if k <= n { Some((0..k).collect()) } else { None },
    }
}

pub struct KSubsets {
    n: usize,
    idx: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = BoxSet;

    fn next(&mut self) -> Option<BoxSet> {
        let idx = self.idx.as_mut()?;
        let out: BoxSet = idx.iter().copied().collect();
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.idx = None;
                break;
            }
            i -= 1;
            if idx[i] < self.n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Nonempty subsets of `0..n` with at most `max_len` members, by size then lexicographically.
pub fn subsets_up_to(n: usize, max_len: usize) -> impl Iterator<Item = BoxSet> {
    (1..=max_len.min(n)).flat_map(move |k| k_subsets(n, k))
}

/// Number of nonempty subsets of an `n`-set with at most `max_len` members.
pub fn count_subsets_up_to(n: usize, max_len: usize) -> u128 {
    (1..=max_len.min(n) as u64)
        .map(|k| {
            crate::rational::binomial(n as u64, k)
                .try_into()
                .unwrap_or(u128::MAX)
        })
        .fold(0u128, |a: u128, b: u128| a.saturating_add(b))
}

pub fn count_k_subsets(n: usize, k: usize) -> u128 {
    crate::rational::binomial(n as u64, k as u64)
        .try_into()
        .unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_lex_and_counts() {
        let all: Vec<Vec<usize>> = k_subsets(4, 2).map(|s| s.to_vec()).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        for n in 0..9 {
            for k in 0..=n {
                assert_eq!(k_subsets(n, k).count() as u128, count_k_subsets(n, k));
            }
        }
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(3, 0).collect::<Vec<_>>(), vec![BoxSet::EMPTY]);
    }

    #[test]
    fn subsets_up_to_counts() {
        assert_eq!(subsets_up_to(4, 2).count(), 10);
        assert_eq!(count_subsets_up_to(4, 2), 10);
        assert_eq!(subsets_up_to(5, 5).count(), 31);
    }

    #[test]
    fn set_algebra() {
        let a: BoxSet = [0, 2, 5].into_iter().collect();
        let b = BoxSet::singleton(2);
        assert_eq!(a.len(), 3);
        assert!(b.is_subset(a));
        assert!(!a.is_disjoint(b));
        assert_eq!(a.complement(6).to_vec(), vec![1, 3, 4]);
        assert_eq!(a.span(), 6);
        assert_eq!(format!("{a}"), "{0,2,5}");
        assert_eq!(a.map_through(&[5, 4, 3, 2, 1, 0]).to_vec(), vec![0, 3, 5]);
        let c: BoxSet = [0, 1].into_iter().collect();
        let d: BoxSet = [0].into_iter().collect();
        assert_eq!(d.lex_cmp(c), Ordering::Less);
        assert_eq!(c.lex_cmp(a), Ordering::Less);
    }
}
