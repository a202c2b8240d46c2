//! Complete hypergraph with a single trap.
//!
//! For `S*` minimizing `|r(S) - r(S̄)|` the searcher opens `S*` with
//! probability `r(S̄*)/R0` and `S̄*` otherwise, the hider traps box `i` with
//! probability `r_i/R0`, and the value is `r(S*) r(S̄*) / R0`.

use num_traits::Zero;

use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::game::{GameInstance, HiderStrategy, Method, SearcherStrategy, Solution};
use crate::partition::{self, PartitionResult};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct K1Solution {
    pub partition: PartitionResult,
    pub solution: Solution,
}

pub fn solve_k1(instance: &GameInstance) -> Result<Solution> {
    solve_k1_detailed(instance).map(|s| s.solution)
}

pub fn solve_k1_detailed(instance: &GameInstance) -> Result<K1Solution> {
    if instance.k() != 1 || !instance.is_complete() {
        return Err(Error::Regime(
            "k1 solver requires k=1 on the complete hypergraph".into(),
        ));
    }
    let n = instance.n();
    let total = instance.total_reward();
    let partition = partition::best_partition(instance.rewards())?;
    if total.is_zero() {
        let first = BoxSet::singleton(instance.sorted_order()[0]);
        let solution = Solution::new(
            Rational::zero(),
            SearcherStrategy::pure(first),
            HiderStrategy::pure(first),
            Method::KEquals1,
        );
        return Ok(K1Solution { partition, solution });
    }

    let side = partition.s_star;
    let other = side.complement(n);
    let r_side = instance.reward_of(side);
    let r_other = instance.reward_of(other);
    let searcher = SearcherStrategy::new(vec![
        (side, &r_other / &total),
        (other, &r_side / &total),
    ])?;
    let hider = HiderStrategy::new(
        (0..n)
            .map(|i| (BoxSet::singleton(i), instance.reward(i) / &total))
            .collect(),
    )?;
    let value = r_side * r_other / total;
    Ok(K1Solution {
        partition,
        solution: Solution::new(value, searcher, hider, Method::KEquals1),
    })
}

/// `r(S) r(S̄)`, checked against `(R0² - (r(S) - r(S̄))²) / 4`.
pub fn quadratic_identity_check(rewards: &[Rational], set: BoxSet) -> Result<Rational> {
    let total: Rational = rewards.iter().sum();
    let inside: Rational = set.iter().map(|i| &rewards[i]).sum();
    let outside = &total - &inside;
    let product = &inside * &outside;
    let gap = &inside - &outside;
    let four = Rational::from_integer(4.into());
    let rhs = (&total * &total - &gap * &gap) / four;
    if product != rhs {
        return Err(Error::Domain(format!(
            "quadratic identity failed: {product} != {rhs}"
        )));
    }
    Ok(product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{expected_payoff, guarantee_of_searcher};
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn set(v: &[usize]) -> BoxSet {
        v.iter().copied().collect()
    }

    #[test]
    fn examples() {
        let g = GameInstance::complete(ints(&[1, 1]), 1).unwrap();
        let s = solve_k1(&g).unwrap();
        assert_eq!(s.value, ratio(1, 2));
        assert_eq!(s.searcher.probability_of(set(&[0])), ratio(1, 2));
        assert_eq!(s.searcher.probability_of(set(&[1])), ratio(1, 2));

        let g = GameInstance::complete(ints(&[5, 4, 3]), 1).unwrap();
        assert_eq!(solve_k1(&g).unwrap().value, ratio(35, 12));

        let g = GameInstance::complete(ints(&[10, 10, 1]), 1).unwrap();
        let d = solve_k1_detailed(&g).unwrap();
        assert_eq!(d.partition.s_star, set(&[0]));
        assert_eq!(d.solution.value, ratio(110, 21));
    }

    #[test]
    fn certified() {
        for r in [&[5, 4, 3][..], &[10, 10, 1], &[7, 4, 8, 5], &[9, 1, 1, 1, 3]] {
            let g = GameInstance::complete(ints(r), 1).unwrap();
            let mut s = solve_k1(&g).unwrap();
            s.certify(&g).unwrap();
            assert!(s.is_certified_optimal(), "{r:?}");
        }
    }

    #[test]
    fn searcher_equalizes_every_trap() {
        let g = GameInstance::complete(ints(&[6, 5, 2, 2]), 1).unwrap();
        let s = solve_k1(&g).unwrap();
        for j in 0..4 {
            let v = expected_payoff(&g, &s.searcher, &HiderStrategy::pure(BoxSet::singleton(j))).unwrap();
            assert_eq!(v, s.value);
        }
        assert_eq!(guarantee_of_searcher(&g, &s.searcher).unwrap(), s.value);
    }

    #[test]
    fn zero_total_reward() {
        let g = GameInstance::complete(ints(&[0, 0, 0]), 1).unwrap();
        let mut s = solve_k1(&g).unwrap();
        assert_eq!(s.value, int(0));
        s.certify(&g).unwrap();
        assert!(s.is_certified_optimal());
    }

    #[test]
    fn single_positive_reward() {
        let g = GameInstance::complete(ints(&[5, 0, 0]), 1).unwrap();
        let mut s = solve_k1(&g).unwrap();
        assert_eq!(s.value, int(0));
        s.certify(&g).unwrap();
        assert!(s.is_certified_optimal());
    }

    #[test]
    fn regime() {
        let g = GameInstance::complete(ints(&[5, 4, 3]), 2).unwrap();
        assert!(matches!(solve_k1(&g), Err(Error::Regime(_))));
    }

    #[test]
    fn quadratic_identity() {
        let r = ints(&[5, 4, 3]);
        assert_eq!(quadratic_identity_check(&r, set(&[0])).unwrap(), int(35));
        assert_eq!(quadratic_identity_check(&r, BoxSet::EMPTY).unwrap(), int(0));
        assert_eq!(quadratic_identity_check(&r, set(&[0, 1, 2])).unwrap(), int(0));
    }
}
