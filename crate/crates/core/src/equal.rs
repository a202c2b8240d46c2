//! Complete hypergraph with identical rewards.
//!
//! The hider traps a uniformly random `k`-set, the searcher opens a uniformly
//! random `m*`-set with `m* = ceil((n-k)/(k+1))`, and the value is
//! `F(m*) = C(n-m*, k) * m* / C(n, k)` times the common reward.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::boxset::{self, BoxSet};
use crate::error::{Error, Result};
use crate::game::{GameInstance, HiderStrategy, Method, SearcherStrategy, Solution};
use crate::rational::{self, Rational};

/// Largest number of atoms a uniform family will materialize.
pub const MATERIALIZE_LIMIT: u128 = 1_000_000;

fn q(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Expected payoff of opening `m` uniformly random boxes against any fixed
/// trap set, scaled by `reward`. Zero when `m > n - k`.
pub fn f_value(n: u64, k: u64, m: u64, reward: &Rational) -> Rational {
    if m > n {
        return Rational::zero();
    }
    rational::binomial_q(n - m, k) * q(m) / rational::binomial_q(n, k) * reward
}

/// `F(m)` in floating point via `m * Π_{i<k} (n-m-i)/(n-i)`.
pub fn f_value_f64(n: u64, k: u64, m: u64) -> f64 {
    if m + k > n {
        return 0.0;
    }
    let mut p = m as f64;
    for i in 0..k {
        p *= (n - m - i) as f64 / (n - i) as f64;
    }
    p
}

/// `ceil((n-k)/(k+1))`, which equals `floor(n/(k+1))`.
pub fn optimal_open_count(n: u64, k: u64) -> u64 {
    (n - k).div_ceil(k + 1)
}

/// Uniform distribution over all `size`-subsets of `n` boxes, kept symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniformFamily {
    pub n: u64,
    pub size: u64,
}

impl UniformFamily {
    pub fn count(&self) -> u128 {
        rational::binomial(self.n, self.size)
            .try_into()
            .unwrap_or(u128::MAX)
    }

    pub fn probability(&self) -> Rational {
        rational::binomial_q(self.n, self.size).recip()
    }

    /// Every member set, lexicographically; fails above [`MATERIALIZE_LIMIT`] atoms.
    pub fn materialize(&self) -> Result<Vec<(BoxSet, Rational)>> {
        let count = self.count();
        if count > MATERIALIZE_LIMIT {
            return Err(Error::capacity("uniform family size", count, MATERIALIZE_LIMIT));
        }
        if self.n as usize > boxset::MAX_BOXES {
            return Err(Error::capacity("number of boxes", self.n as u128, boxset::MAX_BOXES as u128));
        }
        let p = self.probability();
        Ok(boxset::k_subsets(self.n as usize, self.size as usize)
            .map(|s| (s, p.clone()))
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct EqualRewardsSolution {
    pub n: u64,
    pub k: u64,
    pub reward: Rational,
    pub m_star: u64,
    pub value: Rational,
    pub searcher: UniformFamily,
    pub hider: UniformFamily,
}

impl EqualRewardsSolution {
    pub fn to_solution(&self) -> Result<Solution> {
        let searcher = SearcherStrategy::new(self.searcher.materialize()?)?;
        let hider = HiderStrategy::new(self.hider.materialize()?)?;
        Ok(Solution::new(self.value.clone(), searcher, hider, Method::EqualRewards))
    }
}

pub fn solve_equal(n: u64, k: u64, reward: &Rational) -> Result<EqualRewardsSolution> {
    if k < 1 || k + 1 > n {
        return Err(Error::Domain(format!("need 1 <= k <= n-1, got n = {n}, k = {k}")));
    }
    if !reward.is_positive() {
        return Err(Error::Domain("common reward must be positive".into()));
    }
    let m_star = optimal_open_count(n, k);
    Ok(EqualRewardsSolution {
        n,
        k,
        reward: reward.clone(),
        m_star,
        value: f_value(n, k, m_star, reward),
        searcher: UniformFamily { n, size: m_star },
        hider: UniformFamily { n, size: k },
    })
}

/// Solves a complete-hypergraph instance whose rewards all coincide.
pub fn solve_equal_instance(instance: &GameInstance) -> Result<EqualRewardsSolution> {
    if !instance.is_complete() {
        return Err(Error::Regime("equal-rewards solver requires the complete hypergraph".into()));
    }
    if !instance.all_rewards_equal() {
        return Err(Error::Regime("equal-rewards solver requires identical rewards".into()));
    }
    solve_equal(instance.n() as u64, instance.k() as u64, instance.reward(0))
}

/// Limit of `(m*, F(m*))` as `n, k → ∞` with `k/n = theta` fixed.
pub fn asymptotic_ratio_fixed_theta(theta: &Rational) -> Result<(u64, Rational)> {
    let half = Rational::new(1.into(), 2.into());
    if !theta.is_positive() || *theta > half {
        return Err(Error::Domain(format!("theta must lie in (0, 1/2], got {theta}")));
    }
    let one = Rational::one();
    let m = ((&one - theta) / theta).ceil();
    let m_star: u64 = m.to_integer().try_into().map_err(|_| Error::Domain("theta too small".into()))?;
    let limit = q(m_star) * rational::pow(&(one - theta), m_star as u32);
    Ok((m_star, limit))
}

/// `lim U(n,k)/n = (1/(k+1)) (1 - 1/(k+1))^k`.
pub fn asymptotic_ratio_fixed_k(k: u64) -> Rational {
    let base = Rational::new(BigInt::from(k), BigInt::from(k + 1));
    rational::pow(&base, k as u32) / q(k + 1)
}

/// `Π_{i<k} (1 - m/(n-i))`, the chance that none of `m` opened boxes is trapped.
pub fn success_probability(n: u64, k: u64, m: u64) -> Rational {
    let mut p = Rational::one();
    for i in 0..k {
        p *= Rational::one() - q(m) / q(n - i);
    }
    p
}

/// Floating-point `(lower, product, upper)` around the success probability at
/// `m = m*`, where the bounds replace `m*` by `(n+1)/(k+1)` and `(n-k)/(k+1)`.
pub fn success_probability_bounds(n: u64, k: u64) -> (f64, f64, f64) {
    let m = optimal_open_count(n, k) as f64;
    let (nf, kf) = (n as f64, k as f64);
    let mut lower = 1.0;
    let mut mid = 1.0;
    let mut upper = 1.0;
    for i in 0..k {
        let d = nf - i as f64;
        lower *= 1.0 - (nf + 1.0) / d / (kf + 1.0);
        mid *= 1.0 - m / d;
        upper *= 1.0 - (nf - kf) / d / (kf + 1.0);
    }
    (lower, mid, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, to_f64};

    #[test]
    fn f_examples() {
        assert_eq!(f_value(6, 2, 2, &int(1)), ratio(4, 5));
        assert_eq!(f_value(4, 2, 1, &int(1)), ratio(1, 2));
        assert_eq!(f_value(9, 3, 0, &int(1)), int(0));
        assert_eq!(f_value(5, 2, 4, &int(1)), int(0));
        assert_eq!(f_value(6, 2, 2, &int(3)), ratio(12, 5));
    }

    #[test]
    fn solve_examples() {
        let s = solve_equal(6, 2, &int(1)).unwrap();
        assert_eq!((s.m_star, s.value.clone()), (2, ratio(4, 5)));
        let s = solve_equal(4, 2, &int(1)).unwrap();
        assert_eq!((s.m_star, s.value.clone()), (1, ratio(1, 2)));
        let s = solve_equal(2, 1, &int(1)).unwrap();
        assert_eq!((s.m_star, s.value.clone()), (1, ratio(1, 2)));
        assert!(solve_equal(3, 3, &int(1)).is_err());
        assert!(solve_equal(3, 1, &int(0)).is_err());
    }

    #[test]
    fn one_box_when_traps_are_many() {
        for n in 2..40u64 {
            for k in 1..n {
                if 2 * k + 1 >= n {
                    assert_eq!(optimal_open_count(n, k), 1, "n={n} k={k}");
                }
                assert_eq!(optimal_open_count(n, k), n / (k + 1));
            }
        }
    }

    #[test]
    fn materialized_solution_is_optimal() {
        let g = GameInstance::complete(vec![int(1); 6], 2).unwrap();
        let mut sol = solve_equal_instance(&g).unwrap().to_solution().unwrap();
        assert_eq!(sol.searcher.atoms().len(), 15);
        sol.certify(&g).unwrap();
        assert!(sol.is_certified_optimal());
        let big = UniformFamily { n: 60, size: 30 };
        assert!(matches!(big.materialize(), Err(Error::Capacity { .. })));
    }

    #[test]
    fn asymptotic_theta() {
        assert_eq!(asymptotic_ratio_fixed_theta(&ratio(1, 2)).unwrap(), (1, ratio(1, 2)));
        assert_eq!(asymptotic_ratio_fixed_theta(&ratio(1, 3)).unwrap(), (2, ratio(8, 9)));
        assert_eq!(asymptotic_ratio_fixed_theta(&ratio(1, 4)).unwrap(), (3, ratio(81, 64)));
        assert!(asymptotic_ratio_fixed_theta(&ratio(2, 3)).is_err());
        assert!(asymptotic_ratio_fixed_theta(&int(0)).is_err());
    }

    #[test]
    fn asymptotic_k() {
        assert_eq!(asymptotic_ratio_fixed_k(1), ratio(1, 4));
        assert_eq!(asymptotic_ratio_fixed_k(2), ratio(4, 27));
        let v = to_f64(&asymptotic_ratio_fixed_k(10));
        assert!((v - 0.03505).abs() < 5e-6, "{v}");
    }

    #[test]
    fn floating_mode_matches_exact() {
        for (n, k) in [(6, 2), (40, 3), (300, 7), (3000, 1000)] {
            let m = optimal_open_count(n, k);
            let exact = to_f64(&f_value(n, k, m, &int(1)));
            let float = f_value_f64(n, k, m);
            assert!((exact - float).abs() <= 1e-9 * exact.max(1.0), "n={n} k={k}");
        }
    }
}
