//! Exact two-way number partitioning.
//!
//! The optimal difference comes from the complete Karmarkar–Karp search.
//! A second, lexicographic search then picks the canonical optimal side:
//! it contains the largest reward, leaves zero rewards on the other side,
//! and is the smallest such set in sorted-index order.

use num_traits::{Signed, Zero};

use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_PARTITION_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    /// The side holding the largest reward, in original box indices.
    pub s_star: BoxSet,
    /// `|r(S*) - r(complement)|`, minimal over all subsets.
    pub diff: Rational,
    /// The largest-reward box is in `s_star`.
    pub canonical: bool,
}

pub fn best_partition(rewards: &[Rational]) -> Result<PartitionResult> {
    best_partition_with_limit(rewards, DEFAULT_PARTITION_LIMIT)
}

pub fn best_partition_with_limit(rewards: &[Rational], limit: usize) -> Result<PartitionResult> {
    let n = rewards.len();
    if n < 2 {
        return Err(Error::Domain("partitioning needs at least two boxes".into()));
    }
    if n > limit {
        return Err(Error::capacity("number of boxes to partition", n as u128, limit as u128));
    }
    if rewards.iter().any(|r| r.is_negative()) {
        return Err(Error::Domain("rewards must be nonnegative".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| rewards[b].cmp(&rewards[a]).then(a.cmp(&b)));
    let weights: Vec<Rational> = order
        .iter()
        .map(|&i| rewards[i].clone())
        .take_while(|r| r.is_positive())
        .collect();
    if weights.is_empty() {
        return Ok(PartitionResult {
            s_star: BoxSet::singleton(order[0]),
            diff: Rational::zero(),
            canonical: true,
        });
    }

    let diff = ckk_min_difference(&weights);
    let total: Rational = weights.iter().sum();
    let two = Rational::from_integer(2.into());
    let lo = (&total - &diff) / &two;
    let hi = (&total + &diff) / &two;
    let mut suffix = vec![Rational::zero(); weights.len() + 1];
    for p in (0..weights.len()).rev() {
        suffix[p] = &suffix[p + 1] + &weights[p];
    }
    let mut search = LexSearch {
        weights: &weights,
        suffix: &suffix,
        lo: &lo,
        hi: &hi,
        chosen: Vec::new(),
    };
    search.chosen.push(0);
    let found = search.run(1, weights[0].clone());
    assert!(found, "an optimal side containing the largest reward always exists");
    let s_star = search.chosen.iter().map(|&p| order[p]).collect();
    Ok(PartitionResult {
        s_star,
        diff,
        canonical: true,
    })
}

struct LexSearch<'a> {
    weights: &'a [Rational],
    suffix: &'a [Rational],
    lo: &'a Rational,
    hi: &'a Rational,
    chosen: Vec<usize>,
}

impl LexSearch<'_> {
    /// Depth-first in lexicographic order: stopping here beats any extension,
    /// and taking position `j` beats skipping it.
    fn run(&mut self, j: usize, sum: Rational) -> bool {
        if sum == *self.lo || sum == *self.hi {
            return true;
        }
        if sum > *self.hi || &sum + &self.suffix[j] < *self.lo || j == self.weights.len() {
            return false;
        }
        self.chosen.push(j);
        if self.run(j + 1, &sum + &self.weights[j]) {
            return true;
        }
        self.chosen.pop();
        self.run(j + 1, sum)
    }
}

/// Smallest achievable `|r(S) - r(complement)|` over the multiset `weights`.
pub fn ckk_min_difference(weights: &[Rational]) -> Rational {
    let mut sorted: Vec<Rational> = weights.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let total: Rational = sorted.iter().sum();
    let mut best = total.clone();
    ckk(&mut sorted, total, &mut best);
    best
}

/// `ws` is sorted descending and sums to `sum`.
fn ckk(ws: &mut Vec<Rational>, sum: Rational, best: &mut Rational) {
    if best.is_zero() || ws.is_empty() {
        return;
    }
    let rest = &sum - &ws[0];
    if ws[0] >= rest {
        let d = &ws[0] - rest;
        if d < *best {
            *best = d;
        }
        return;
    }
    let a = ws.remove(0);
    let b = ws.remove(0);

    // put a and b on opposite sides
    let d = &a - &b;
    let at = insert_desc(ws, d);
    ckk(ws, &sum - &b - &b, best);
    ws.remove(at);

    // put them together
    let s = &a + &b;
    let at = insert_desc(ws, s);
    ckk(ws, sum, best);
    ws.remove(at);

    ws.insert(0, b);
    ws.insert(0, a);
}

fn insert_desc(ws: &mut Vec<Rational>, v: Rational) -> usize {
    let at = ws.partition_point(|x| *x > v);
    ws.insert(at, v);
    at
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn set(v: &[usize]) -> BoxSet {
        v.iter().copied().collect()
    }

    #[test]
    fn examples() {
        let p = best_partition(&ints(&[1, 1])).unwrap();
        assert_eq!((p.s_star, p.diff), (set(&[0]), int(0)));
        let p = best_partition(&ints(&[3, 1, 1, 1])).unwrap();
        assert_eq!((p.s_star, p.diff), (set(&[0]), int(0)));
        let p = best_partition(&ints(&[5, 4, 3])).unwrap();
        assert_eq!((p.s_star, p.diff), (set(&[0]), int(2)));
        assert!(p.canonical);
    }

    #[test]
    fn original_indices_and_ties() {
        // sorted: 8(idx2), 7(idx0), 5(idx3), 4(idx1); {8,4} vs {7,5}
        let p = best_partition(&ints(&[7, 4, 8, 5])).unwrap();
        assert_eq!(p.diff, int(0));
        assert_eq!(p.s_star, set(&[2, 1]));
    }

    #[test]
    fn zero_rewards_stay_out() {
        let p = best_partition(&ints(&[0, 2, 0, 2])).unwrap();
        assert_eq!((p.s_star, p.diff), (set(&[1]), int(0)));
        let p = best_partition(&ints(&[0, 0])).unwrap();
        assert_eq!(p.diff, int(0));
        assert_eq!(p.s_star.len(), 1);
    }

    #[test]
    fn rational_weights() {
        let p = best_partition(&[ratio(1, 2), ratio(1, 3), ratio(1, 6)]).unwrap();
        assert_eq!((p.s_star, p.diff), (set(&[0]), int(0)));
    }

    #[test]
    fn errors() {
        assert!(best_partition(&ints(&[1])).is_err());
        assert!(best_partition(&ints(&[1, -1])).is_err());
        assert!(matches!(
            best_partition_with_limit(&ints(&[1, 2, 3]), 2),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn ckk_known_values() {
        assert_eq!(ckk_min_difference(&ints(&[8, 7, 6, 5, 4])), int(0));
        assert_eq!(ckk_min_difference(&ints(&[10, 1, 1])), int(8));
        assert_eq!(ckk_min_difference(&ints(&[4, 5, 6, 7, 8])), int(0));
        assert_eq!(ckk_min_difference(&ints(&[2, 2, 3])), int(1));
    }
}
