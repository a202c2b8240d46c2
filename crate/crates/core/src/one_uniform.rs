//! Closed-form solution when the searcher opens a single box.
//!
//! With searchable boxes sorted so that `r_1 >= r_2 >= ...`, opening box `j`
//! with probability proportional to `1/r_j` over the top `t` boxes guarantees
//! `V(t) = (t - k) * lambda([t])`. The best such `t` gives the value, and the
//! hider equalizes by trapping box `j <= t*` with probability `1 - V(t*)/r_j`.

use num_traits::{One, Signed, Zero};

use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::game::{GameInstance, HiderStrategy, Method, SearcherStrategy, Solution};
use crate::rational::{self, Rational};

/// `(Σ_{i ∈ set} 1/r_i)^{-1}`.
pub fn lambda_of(rewards: &[Rational], set: &[usize]) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::Domain("lambda of an empty box set".into()));
    }
    if let Some(&i) = set.iter().find(|&&i| !rewards[i].is_positive()) {
        return Err(Error::Domain(format!("box {i} has zero reward")));
    }
    Ok(rational::harmonic_inverse(set.iter().map(|&i| &rewards[i])).expect("positive rewards"))
}

/// Boxes the searcher can open on their own.
///
/// Edges with two or more boxes are always trapped when `k = n - 1`, so any
/// hypergraph with singleton edges reduces to the one-uniform game there.
pub fn searchable_boxes(instance: &GameInstance) -> Result<BoxSet> {
    let singles = instance.singleton_edges();
    if instance.is_one_uniform() || (instance.k() + 1 == instance.n() && !singles.is_empty()) {
        Ok(singles)
    } else {
        Err(Error::Regime(
            "one-uniform solver requires a 1-uniform hypergraph, or k = n-1 with singleton edges".into(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueCurve {
    /// Searchable boxes with positive reward, by reward descending.
    pub boxes: Vec<usize>,
    /// `(t, V(t))` for `t = k..=boxes.len()`; empty when fewer than `k` such boxes exist.
    pub points: Vec<(usize, Rational)>,
}

impl ValueCurve {
    /// True when no `t > k` exists, so the game value is 0.
    pub fn is_degenerate(&self) -> bool {
        self.boxes.len() <= self.points.first().map_or(usize::MAX, |p| p.0)
    }

    /// Smallest maximizer `t*` and `V(t*)`.
    pub fn argmax(&self) -> Option<(usize, &Rational)> {
        let mut best: Option<(usize, &Rational)> = None;
        for (t, v) in &self.points {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((*t, v));
            }
        }
        best
    }
}

pub fn value_curve(instance: &GameInstance) -> Result<ValueCurve> {
    let searchable = searchable_boxes(instance)?;
    let boxes: Vec<usize> = instance
        .sorted_order()
        .iter()
        .copied()
        .filter(|&i| searchable.contains(i) && instance.reward(i).is_positive())
        .collect();
    let k = instance.k();
    let mut points = Vec::new();
    if boxes.len() >= k {
        let mut inv_sum = Rational::zero();
        for (pos, &i) in boxes.iter().enumerate() {
            let t = pos + 1;
            inv_sum += instance.reward(i).recip();
            if t == k {
                points.push((k, Rational::zero()));
            } else if t > k {
                points.push((t, Rational::from_integer(((t - k) as i64).into()) / &inv_sum));
            }
        }
    }
    Ok(ValueCurve { boxes, points })
}

#[derive(Clone, Debug)]
pub struct OneUniformSolution {
    /// Number of top boxes the searcher mixes over; `None` in the degenerate case.
    pub t_star: Option<usize>,
    pub value: Rational,
    /// Per-box opening probability, original indexing.
    pub searcher_probs: Vec<Rational>,
    /// Per-box trap probability, original indexing.
    pub hider_marginals: Vec<Rational>,
    pub hider_mixture: HiderStrategy,
}

impl OneUniformSolution {
    pub fn searcher(&self) -> SearcherStrategy {
        let atoms = self
            .searcher_probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| (BoxSet::singleton(i), p.clone()))
            .collect();
        SearcherStrategy::new(atoms).expect("searcher probabilities form a distribution")
    }

    pub fn to_solution(&self) -> Solution {
        Solution::new(
            self.value.clone(),
            self.searcher(),
            self.hider_mixture.clone(),
            Method::OneUniform,
        )
    }
}

pub fn solve_one_uniform(instance: &GameInstance) -> Result<OneUniformSolution> {
    let n = instance.n();
    let k = instance.k();
    let curve = value_curve(instance)?;
    let mut searcher_probs = vec![Rational::zero(); n];

    let Some((t_star, value)) = curve.argmax().filter(|(t, _)| *t > k) else {
        // At most k boxes are worth opening: trap them all and pad the set.
        let searchable = searchable_boxes(instance)?;
        let first = instance
            .sorted_order()
            .iter()
            .copied()
            .find(|&i| searchable.contains(i))
            .expect("searchable set is nonempty");
        searcher_probs[first] = Rational::one();
        let mut traps: BoxSet = curve.boxes.iter().copied().collect();
        let fill = instance
            .sorted_order()
            .iter()
            .copied()
            .filter(|&i| searchable.contains(i))
            .chain(0..n);
        for i in fill {
            if traps.len() == k {
                break;
            }
            traps.insert(i);
        }
        let hider_marginals = (0..n)
            .map(|i| if traps.contains(i) { Rational::one() } else { Rational::zero() })
            .collect();
        return Ok(OneUniformSolution {
            t_star: None,
            value: Rational::zero(),
            searcher_probs,
            hider_marginals,
            hider_mixture: HiderStrategy::pure(traps),
        });
    };
    let value = value.clone();
    let top = &curve.boxes[..t_star];
    let lambda = lambda_of(instance.rewards(), top)?;
    let mut hider_marginals = vec![Rational::zero(); n];
    for &i in top {
        let r = instance.reward(i);
        searcher_probs[i] = &lambda / r;
        hider_marginals[i] = Rational::one() - &value / r;
    }
    let hider_mixture = rotation_mixture(&hider_marginals, k)?;
    Ok(OneUniformSolution {
        t_star: Some(t_star),
        value,
        searcher_probs,
        hider_marginals,
        hider_mixture,
    })
}

/// Realizes per-box trap probabilities summing to `k` as an exact distribution
/// over `k`-sets.
///
/// Boxes with positive marginal are laid out in ascending index order as
/// consecutive intervals of `[0, k)`. For an offset `theta` in `[0, 1)` the
/// trap set is the boxes whose intervals hold `theta, theta+1, ..., theta+k-1`.
/// That set only changes where `theta` crosses the fractional part of an
/// interval endpoint, so each constant stretch becomes one atom.
pub fn rotation_mixture(marginals: &[Rational], k: usize) -> Result<HiderStrategy> {
    if let Some(i) = marginals
        .iter()
        .position(|y| y.is_negative() || *y > Rational::one())
    {
        return Err(Error::Domain(format!(
            "marginal of box {i} is {}, outside [0, 1]",
            marginals[i]
        )));
    }
    let total: Rational = marginals.iter().sum();
    let k_q = Rational::from_integer((k as i64).into());
    if total != k_q {
        return Err(Error::Domain(format!("marginals sum to {total}, expected {k}")));
    }

    let boxes: Vec<usize> = (0..marginals.len()).filter(|&i| marginals[i].is_positive()).collect();
    let mut ends = Vec::with_capacity(boxes.len());
    let mut acc = Rational::zero();
    for &i in &boxes {
        acc += &marginals[i];
        ends.push(acc.clone());
    }

    let mut cuts: Vec<Rational> = ends.iter().map(|e| e.fract()).collect();
    cuts.push(Rational::zero());
    cuts.push(Rational::one());
    cuts.sort();
    cuts.dedup();

    let two = Rational::from_integer(2.into());
    let mut atoms: Vec<(BoxSet, Rational)> = Vec::new();
    for w in cuts.windows(2) {
        let theta = (&w[0] + &w[1]) / &two;
        let mut set = BoxSet::EMPTY;
        for j in 0..k {
            let point = &theta + Rational::from_integer((j as i64).into());
            // first interval whose right end lies beyond the point
            let pos = ends.partition_point(|e| *e <= point);
            set.insert(boxes[pos]);
        }
        debug_assert_eq!(set.len(), k);
        let len = &w[1] - &w[0];
        match atoms.iter_mut().find(|(s, _)| *s == set) {
            Some((_, p)) => *p += len,
            None => atoms.push((set, len)),
        }
    }
    HiderStrategy::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{guarantee_of_hider, guarantee_of_searcher, Hypergraph};
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn set(v: &[usize]) -> BoxSet {
        v.iter().copied().collect()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_of(&ints(&[10, 10, 1]), &[0, 1]).unwrap(), int(5));
        assert_eq!(lambda_of(&ints(&[4, 4, 2]), &[0, 1, 2]).unwrap(), int(1));
        assert_eq!(lambda_of(&ints(&[7, 7, 7, 7, 7]), &[0, 1, 2, 3, 4]).unwrap(), ratio(7, 5));
        assert!(lambda_of(&ints(&[3, 0]), &[0, 1]).is_err());
        assert!(lambda_of(&ints(&[3, 0]), &[]).is_err());
    }

    #[test]
    fn value_curve_example() {
        let g = GameInstance::one_uniform(ints(&[10, 10, 1]), 1).unwrap();
        let c = value_curve(&g).unwrap();
        assert_eq!(c.points, vec![(1, int(0)), (2, int(5)), (3, ratio(5, 3))]);
        assert_eq!(c.argmax().unwrap(), (2, &int(5)));
    }

    #[test]
    fn value_curve_equal_rewards() {
        for n in 2..9usize {
            for k in 1..n {
                let g = GameInstance::one_uniform(vec![int(1); n], k).unwrap();
                for (t, v) in value_curve(&g).unwrap().points {
                    assert_eq!(v, ratio((t - k) as i64, t as i64));
                }
            }
        }
    }

    #[test]
    fn k_equals_n_minus_one_uses_all_boxes() {
        let g = GameInstance::one_uniform(ints(&[4, 4, 2]), 2).unwrap();
        let c = value_curve(&g).unwrap();
        assert_eq!(c.points.last().unwrap(), &(3, int(1)));
        let s = solve_one_uniform(&g).unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.searcher_probs, vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]);
    }

    #[test]
    fn three_box_example() {
        let g = GameInstance::one_uniform(ints(&[10, 10, 1]), 1).unwrap();
        let s = solve_one_uniform(&g).unwrap();
        assert_eq!(s.t_star, Some(2));
        assert_eq!(s.value, int(5));
        assert_eq!(s.searcher_probs, vec![ratio(1, 2), ratio(1, 2), int(0)]);
        assert_eq!(s.hider_marginals, vec![ratio(1, 2), ratio(1, 2), int(0)]);
        assert_eq!(guarantee_of_searcher(&g, &s.searcher()).unwrap(), int(5));
        assert_eq!(guarantee_of_hider(&g, &s.hider_mixture).unwrap(), int(5));
    }

    #[test]
    fn equal_rewards_open_uniformly() {
        let g = GameInstance::one_uniform(vec![int(3); 5], 2).unwrap();
        let s = solve_one_uniform(&g).unwrap();
        assert_eq!(s.value, ratio(9, 5));
        assert!(s.searcher_probs.iter().all(|p| *p == ratio(1, 5)));
        assert!(s.hider_marginals.iter().all(|y| *y == ratio(2, 5)));
    }

    #[test]
    fn restricted_box_set_and_zero_rewards() {
        // box 0 is not searchable, box 3 has no reward
        let g = GameInstance::new(ints(&[100, 6, 3, 0, 2]), 1, Hypergraph::OneUniform(set(&[1, 2, 3, 4]))).unwrap();
        let s = solve_one_uniform(&g).unwrap();
        let mut sol = s.to_solution();
        sol.certify(&g).unwrap();
        assert!(sol.is_certified_optimal());
        assert_eq!(s.value, int(2));
        assert_eq!(s.searcher_probs[0], int(0));
        assert_eq!(s.searcher_probs[3], int(0));
    }

    #[test]
    fn too_few_searchable_boxes_gives_zero() {
        let g = GameInstance::new(ints(&[5, 4, 3, 2]), 2, Hypergraph::OneUniform(set(&[1, 3]))).unwrap();
        let s = solve_one_uniform(&g).unwrap();
        assert_eq!(s.t_star, None);
        assert_eq!(s.value, int(0));
        let mut sol = s.to_solution();
        sol.certify(&g).unwrap();
        assert!(sol.is_certified_optimal());

        let g = GameInstance::new(ints(&[5, 0, 0, 2]), 1, Hypergraph::OneUniform(set(&[1, 2]))).unwrap();
        let mut sol = solve_one_uniform(&g).unwrap().to_solution();
        sol.certify(&g).unwrap();
        assert!(sol.is_certified_optimal());
    }

    #[test]
    fn complete_hypergraph_needs_k_n_minus_one() {
        let g = GameInstance::complete(ints(&[5, 4, 3]), 1).unwrap();
        assert!(matches!(solve_one_uniform(&g), Err(Error::Regime(_))));
        let g = GameInstance::complete(ints(&[5, 4, 3]), 2).unwrap();
        assert!(solve_one_uniform(&g).is_ok());
    }

    #[test]
    fn rotation_examples() {
        let q = rotation_mixture(&[ratio(1, 2), ratio(1, 2)], 1).unwrap();
        assert_eq!(q.atoms(), &[(set(&[0]), ratio(1, 2)), (set(&[1]), ratio(1, 2))]);

        let q = rotation_mixture(&[int(1), int(1), int(0), int(0)], 2).unwrap();
        assert_eq!(q.atoms(), &[(set(&[0, 1]), int(1))]);

        let third = ratio(2, 3);
        let q = rotation_mixture(&[third.clone(), third.clone(), third], 2).unwrap();
        assert_eq!(q.atoms().len(), 3);
        for s in [set(&[0, 1]), set(&[1, 2]), set(&[0, 2])] {
            assert_eq!(q.probability_of(s), ratio(1, 3));
        }
    }

    #[test]
    fn rotation_rejects_bad_marginals() {
        assert!(rotation_mixture(&[ratio(3, 2), ratio(1, 2)], 2).is_err());
        assert!(rotation_mixture(&[ratio(1, 2), ratio(1, 3)], 1).is_err());
        assert!(rotation_mixture(&[ratio(-1, 2), ratio(1, 2), int(1)], 1).is_err());
    }
}
