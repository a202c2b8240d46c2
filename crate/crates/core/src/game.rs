//! Problem representation, payoffs, and certification sweeps.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boxset::{self, BoxSet, MAX_BOXES};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Upper bound on the number of pure strategies a certification sweep enumerates.
pub const SWEEP_LIMIT: u128 = 1 << 22;

/// The searcher's allowed pure strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypergraph {
    /// Every nonempty subset of boxes.
    Complete,
    /// Singletons `{i}` for `i` in the given set.
    OneUniform(BoxSet),
    /// An explicit list of distinct nonempty edges.
    Explicit(Vec<BoxSet>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameInstance {
    rewards: Vec<Rational>,
    k: usize,
    hypergraph: Hypergraph,
    /// Box indices by reward descending, ties by index ascending.
    order: Vec<usize>,
}

impl GameInstance {
    pub fn new(rewards: Vec<Rational>, k: usize, hypergraph: Hypergraph) -> Result<Self> {
        let n = rewards.len();
        if !(2..=MAX_BOXES).contains(&n) {
            return Err(Error::InvalidInstance(format!(
                "number of boxes must be in 2..={MAX_BOXES}, got {n}"
            )));
        }
        if k < 1 || k > n - 1 {
            return Err(Error::InvalidInstance(format!(
                "trap count k must satisfy 1 <= k <= n-1 = {}, got {k}",
                n - 1
            )));
        }
        if let Some(i) = rewards.iter().position(|r| r.is_negative()) {
            return Err(Error::InvalidInstance(format!(
                "reward of box {i} is negative"
            )));
        }
        let universe = BoxSet::full(n);
        match &hypergraph {
            Hypergraph::Complete => {}
            Hypergraph::OneUniform(a) => {
                if a.is_empty() {
                    return Err(Error::InvalidInstance("one-uniform box set is empty".into()));
                }
                if !a.is_subset(universe) {
                    return Err(Error::InvalidInstance(format!(
                        "one-uniform box set {a} is not within 0..{n}"
                    )));
                }
            }
            Hypergraph::Explicit(edges) => {
                if edges.is_empty() {
                    return Err(Error::InvalidInstance("explicit hypergraph has no edges".into()));
                }
                let mut seen = HashSet::new();
                for e in edges {
                    if e.is_empty() || !e.is_subset(universe) {
                        return Err(Error::InvalidInstance(format!(
                            "edge {e} must be a nonempty subset of 0..{n}"
                        )));
                    }
                    if !seen.insert(*e) {
                        return Err(Error::InvalidInstance(format!("duplicate edge {e}")));
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| rewards[b].cmp(&rewards[a]).then(a.cmp(&b)));
        Ok(GameInstance {
            rewards,
            k,
            hypergraph,
            order,
        })
    }

    pub fn complete(rewards: Vec<Rational>, k: usize) -> Result<Self> {
        Self::new(rewards, k, Hypergraph::Complete)
    }

    /// One-uniform game where every box may be opened.
    pub fn one_uniform(rewards: Vec<Rational>, k: usize) -> Result<Self> {
        let all = BoxSet::full(rewards.len());
        Self::new(rewards, k, Hypergraph::OneUniform(all))
    }

    pub fn n(&self) -> usize {
        self.rewards.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rewards(&self) -> &[Rational] {
        &self.rewards
    }

    pub fn reward(&self, i: usize) -> &Rational {
        &self.rewards[i]
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    /// Box indices sorted by reward descending; position 0 holds the largest reward.
    pub fn sorted_order(&self) -> &[usize] {
        &self.order
    }

    /// Rewards in sorted (non-increasing) order.
    pub fn sorted_rewards(&self) -> Vec<Rational> {
        self.order.iter().map(|&i| self.rewards[i].clone()).collect()
    }

    pub fn total_reward(&self) -> Rational {
        self.rewards.iter().sum()
    }

    pub fn reward_of(&self, set: BoxSet) -> Rational {
        set.iter().map(|i| &self.rewards[i]).sum()
    }

    pub fn all_rewards_equal(&self) -> bool {
        self.rewards.iter().all(|r| *r == self.rewards[0])
    }

    pub fn universe(&self) -> BoxSet {
        BoxSet::full(self.n())
    }

    pub fn is_edge(&self, set: BoxSet) -> bool {
        if set.is_empty() || !set.is_subset(self.universe()) {
            return false;
        }
        match &self.hypergraph {
            Hypergraph::Complete => true,
            Hypergraph::OneUniform(a) => set.len() == 1 && set.is_subset(*a),
            Hypergraph::Explicit(edges) => edges.contains(&set),
        }
    }

    /// Boxes `i` for which `{i}` is an edge.
    pub fn singleton_edges(&self) -> BoxSet {
        match &self.hypergraph {
            Hypergraph::Complete => self.universe(),
            Hypergraph::OneUniform(a) => *a,
            Hypergraph::Explicit(edges) => edges.iter().filter(|e| e.len() == 1).fold(BoxSet::EMPTY, |a, e| a.union(*e)),
        }
    }

    /// True when every edge is a singleton.
    pub fn is_one_uniform(&self) -> bool {
        match &self.hypergraph {
            Hypergraph::Complete => false,
            Hypergraph::OneUniform(_) => true,
            Hypergraph::Explicit(edges) => edges.iter().all(|e| e.len() == 1),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.hypergraph == Hypergraph::Complete
    }

    /// Searcher pure strategies worth considering: for the complete hypergraph the
    /// nonempty subsets of size at most `n - k` (larger ones are always trapped);
    /// otherwise every listed edge.
    pub fn searcher_edges(&self, limit: u128) -> Result<Vec<BoxSet>> {
        match &self.hypergraph {
            Hypergraph::Complete => {
                let n = self.n();
                let count = boxset::count_subsets_up_to(n, n - self.k);
                if count > limit {
                    return Err(Error::capacity("number of searcher pure strategies", count, limit));
                }
                Ok(boxset::subsets_up_to(n, n - self.k).collect())
            }
            Hypergraph::OneUniform(a) => Ok(a.iter().map(BoxSet::singleton).collect()),
            Hypergraph::Explicit(edges) => {
                if edges.len() as u128 > limit {
                    return Err(Error::capacity(
                        "number of searcher pure strategies",
                        edges.len() as u128,
                        limit,
                    ));
                }
                Ok(edges.clone())
            }
        }
    }

    /// All `k`-subsets of boxes.
    pub fn hider_sets(&self, limit: u128) -> Result<Vec<BoxSet>> {
        let count = boxset::count_k_subsets(self.n(), self.k);
        if count > limit {
            return Err(Error::capacity("number of hider pure strategies", count, limit));
        }
        Ok(boxset::k_subsets(self.n(), self.k).collect())
    }

    fn check_hider_set(&self, set: BoxSet) -> Result<()> {
        if set.len() != self.k || !set.is_subset(self.universe()) {
            return Err(Error::InvalidStrategy(format!(
                "trap set {set} must contain exactly k = {} boxes of 0..{}",
                self.k,
                self.n()
            )));
        }
        Ok(())
    }
}

fn check_distribution(atoms: &mut Vec<(BoxSet, Rational)>, who: &str) -> Result<()> {
    if let Some((s, _)) = atoms.iter().find(|(_, p)| p.is_negative()) {
        return Err(Error::InvalidStrategy(format!("{who} atom {s} has negative probability")));
    }
    atoms.retain(|(_, p)| !p.is_zero());
    let total: Rational = atoms.iter().map(|(_, p)| p).sum();
    if !total.is_one() {
        return Err(Error::InvalidStrategy(format!(
            "{who} probabilities sum to {total}, not 1"
        )));
    }
    let mut seen = HashSet::new();
    for (s, _) in atoms.iter() {
        if !seen.insert(*s) {
            return Err(Error::InvalidStrategy(format!("{who} atom {s} appears twice")));
        }
    }
    Ok(())
}

/// A finite distribution over searcher edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearcherStrategy {
    atoms: Vec<(BoxSet, Rational)>,
}

impl SearcherStrategy {
    /// Zero-probability atoms are dropped.
    pub fn new(mut atoms: Vec<(BoxSet, Rational)>) -> Result<Self> {
        check_distribution(&mut atoms, "searcher")?;
        if let Some((s, _)) = atoms.iter().find(|(s, _)| s.is_empty()) {
            return Err(Error::InvalidStrategy(format!("searcher edge {s} is empty")));
        }
        Ok(SearcherStrategy { atoms })
    }

    pub fn pure(edge: BoxSet) -> Self {
        SearcherStrategy {
            atoms: vec![(edge, Rational::one())],
        }
    }

    pub fn atoms(&self) -> &[(BoxSet, Rational)] {
        &self.atoms
    }

    pub fn probability_of(&self, edge: BoxSet) -> Rational {
        self.atoms
            .iter()
            .find(|(s, _)| *s == edge)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn validate(&self, instance: &GameInstance) -> Result<()> {
        match self.atoms.iter().find(|(s, _)| !instance.is_edge(*s)) {
            Some((s, _)) => Err(Error::InvalidStrategy(format!(
                "searcher atom {s} is not an edge of the hypergraph"
            ))),
            None => Ok(()),
        }
    }

    /// Box indices permuted through `map`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        SearcherStrategy {
            atoms: self
                .atoms
                .iter()
                .map(|(s, p)| (s.map_through(map), p.clone()))
                .collect(),
        }
    }
}

/// A finite distribution over trap sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiderStrategy {
    atoms: Vec<(BoxSet, Rational)>,
}

impl HiderStrategy {
    /// Zero-probability atoms are dropped.
    pub fn new(mut atoms: Vec<(BoxSet, Rational)>) -> Result<Self> {
        check_distribution(&mut atoms, "hider")?;
        if let Some(first) = atoms.first() {
            let k = first.0.len();
            if let Some((s, _)) = atoms.iter().find(|(s, _)| s.len() != k) {
                return Err(Error::InvalidStrategy(format!(
                    "trap set {s} has {} boxes, expected {k}",
                    s.len()
                )));
            }
        }
        Ok(HiderStrategy { atoms })
    }

    pub fn pure(set: BoxSet) -> Self {
        HiderStrategy {
            atoms: vec![(set, Rational::one())],
        }
    }

    pub fn atoms(&self) -> &[(BoxSet, Rational)] {
        &self.atoms
    }

    pub fn validate(&self, instance: &GameInstance) -> Result<()> {
        self.atoms
            .iter()
            .try_for_each(|(s, _)| instance.check_hider_set(*s))
    }

    /// Probability that each box `0..n` is trapped.
    pub fn marginals(&self, n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (s, p) in &self.atoms {
            for i in s.iter() {
                out[i] += p;
            }
        }
        out
    }

    pub fn probability_of(&self, set: BoxSet) -> Rational {
        self.atoms
            .iter()
            .find(|(s, _)| *s == set)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn relabel(&self, map: &[usize]) -> Self {
        HiderStrategy {
            atoms: self
                .atoms
                .iter()
                .map(|(s, p)| (s.map_through(map), p.clone()))
                .collect(),
        }
    }
}

/// Reward collected by opening `searched` when `trapped` holds the traps.
pub fn payoff(instance: &GameInstance, searched: BoxSet, trapped: BoxSet) -> Result<Rational> {
    if !instance.is_edge(searched) {
        return Err(Error::InvalidStrategy(format!(
            "{searched} is not an edge of the hypergraph"
        )));
    }
    instance.check_hider_set(trapped)?;
    Ok(raw_payoff(instance, searched, trapped))
}

pub(crate) fn raw_payoff(instance: &GameInstance, searched: BoxSet, trapped: BoxSet) -> Rational {
    if searched.is_disjoint(trapped) {
        instance.reward_of(searched)
    } else {
        Rational::zero()
    }
}

pub fn expected_payoff(
    instance: &GameInstance,
    searcher: &SearcherStrategy,
    hider: &HiderStrategy,
) -> Result<Rational> {
    searcher.validate(instance)?;
    hider.validate(instance)?;
    let mut total = Rational::zero();
    for (s, p) in &searcher.atoms {
        let reward = instance.reward_of(*s);
        let free: Rational = hider
            .atoms
            .iter()
            .filter(|(h, _)| h.is_disjoint(*s))
            .map(|(_, q)| q)
            .sum();
        total += p * reward * free;
    }
    Ok(total)
}

/// `R(p, H)` for every trap set `H`, in lexicographic order of `H`.
pub fn searcher_payoffs(
    instance: &GameInstance,
    searcher: &SearcherStrategy,
) -> Result<Vec<(BoxSet, Rational)>> {
    searcher.validate(instance)?;
    let weighted: Vec<(BoxSet, Rational)> = searcher
        .atoms
        .iter()
        .map(|(s, p)| (*s, p * instance.reward_of(*s)))
        .collect();
    Ok(instance
        .hider_sets(SWEEP_LIMIT)?
        .into_iter()
        .map(|h| {
            let v: Rational = weighted
                .iter()
                .filter(|(s, _)| s.is_disjoint(h))
                .map(|(_, w)| w)
                .sum();
            (h, v)
        })
        .collect())
}

/// `R(S, q)` for every searcher pure strategy `S` in [`GameInstance::searcher_edges`].
pub fn hider_payoffs(
    instance: &GameInstance,
    hider: &HiderStrategy,
) -> Result<Vec<(BoxSet, Rational)>> {
    hider.validate(instance)?;
    Ok(instance
        .searcher_edges(SWEEP_LIMIT)?
        .into_iter()
        .map(|s| {
            let free: Rational = hider
                .atoms
                .iter()
                .filter(|(h, _)| h.is_disjoint(s))
                .map(|(_, q)| q)
                .sum();
            (s, instance.reward_of(s) * free)
        })
        .collect())
}

/// `min_H R(p, H)` over all trap sets.
pub fn guarantee_of_searcher(instance: &GameInstance, searcher: &SearcherStrategy) -> Result<Rational> {
    Ok(searcher_payoffs(instance, searcher)?
        .into_iter()
        .map(|(_, v)| v)
        .min()
        .unwrap_or_else(Rational::zero))
}

/// `max_S R(S, q)` over all searcher pure strategies.
pub fn guarantee_of_hider(instance: &GameInstance, hider: &HiderStrategy) -> Result<Rational> {
    // Complete hypergraphs skip edges larger than n-k; they pay 0, and 0 is a floor anyway.
    Ok(hider_payoffs(instance, hider)?
        .into_iter()
        .map(|(_, v)| v)
        .max()
        .unwrap_or_else(Rational::zero))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    OneUniform,
    EqualRewards,
    #[serde(rename = "k1")]
    KEquals1,
    #[serde(rename = "n4k2")]
    N4K2,
    LpOracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::OneUniform => "one_uniform",
            Method::EqualRewards => "equal_rewards",
            Method::KEquals1 => "k1",
            Method::N4K2 => "n4k2",
            Method::LpOracle => "lp_oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Payoffs of each strategy against every opposing pure strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    /// `R(p, H)` per trap set `H`.
    pub searcher_payoffs: Vec<(BoxSet, Rational)>,
    /// `R(S, q)` per searcher pure strategy `S`.
    pub hider_payoffs: Vec<(BoxSet, Rational)>,
    pub searcher_guarantee: Rational,
    pub hider_guarantee: Rational,
}

impl Certificates {
    pub fn compute(
        instance: &GameInstance,
        searcher: &SearcherStrategy,
        hider: &HiderStrategy,
    ) -> Result<Self> {
        let searcher_payoffs = searcher_payoffs(instance, searcher)?;
        let hider_payoffs = hider_payoffs(instance, hider)?;
        let searcher_guarantee = searcher_payoffs
            .iter()
            .map(|(_, v)| v)
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero);
        let hider_guarantee = hider_payoffs
            .iter()
            .map(|(_, v)| v)
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero);
        Ok(Certificates {
            searcher_payoffs,
            hider_payoffs,
            searcher_guarantee,
            hider_guarantee,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub value: Rational,
    pub searcher: SearcherStrategy,
    pub hider: HiderStrategy,
    pub method: Method,
    pub certificates: Option<Certificates>,
}

impl Solution {
    pub fn new(value: Rational, searcher: SearcherStrategy, hider: HiderStrategy, method: Method) -> Self {
        Solution {
            value,
            searcher,
            hider,
            method,
            certificates: None,
        }
    }

    /// Runs both pure-deviation sweeps and stores the result.
    pub fn certify(&mut self, instance: &GameInstance) -> Result<&Certificates> {
        let certs = Certificates::compute(instance, &self.searcher, &self.hider)?;
        Ok(self.certificates.insert(certs))
    }

    /// Both sweeps ran and `searcher guarantee = value = hider guarantee`.
    pub fn is_certified_optimal(&self) -> bool {
        self.certificates.as_ref().is_some_and(|c| {
            c.searcher_guarantee == self.value && c.hider_guarantee == self.value
        })
    }
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
    fn payoff_examples() {
        let g = GameInstance::complete(ints(&[2, 3, 5]), 1).unwrap();
        assert_eq!(payoff(&g, set(&[0, 1]), set(&[2])).unwrap(), int(5));
        assert_eq!(payoff(&g, set(&[0, 1]), set(&[1])).unwrap(), int(0));
        let g = GameInstance::one_uniform(ints(&[10, 10, 1]), 1).unwrap();
        assert_eq!(payoff(&g, set(&[2]), set(&[0])).unwrap(), int(1));
    }

    #[test]
    fn payoff_rejects_non_edges_and_bad_trap_sets() {
        let g = GameInstance::one_uniform(ints(&[10, 10, 1]), 1).unwrap();
        assert!(matches!(
            payoff(&g, set(&[0, 1]), set(&[2])),
            Err(Error::InvalidStrategy(_))
        ));
        assert!(matches!(
            payoff(&g, set(&[0]), set(&[1, 2])),
            Err(Error::InvalidStrategy(_))
        ));
        assert!(payoff(&g, BoxSet::EMPTY, set(&[1])).is_err());
    }

    #[test]
    fn expected_payoff_examples() {
        let g = GameInstance::one_uniform(ints(&[10, 10, 1]), 1).unwrap();
        let p = SearcherStrategy::new(vec![(set(&[0]), ratio(1, 2)), (set(&[1]), ratio(1, 2))]).unwrap();
        let q = HiderStrategy::pure(set(&[0]));
        assert_eq!(expected_payoff(&g, &p, &q).unwrap(), int(5));
        let q = HiderStrategy::new(vec![(set(&[0]), ratio(1, 2)), (set(&[1]), ratio(1, 2))]).unwrap();
        assert_eq!(expected_payoff(&g, &p, &q).unwrap(), int(5));
        assert_eq!(guarantee_of_searcher(&g, &p).unwrap(), int(5));
        assert_eq!(guarantee_of_hider(&g, &q).unwrap(), int(5));

        let g = GameInstance::complete(ints(&[2, 3, 5]), 1).unwrap();
        let p = SearcherStrategy::pure(set(&[0, 1]));
        let q = HiderStrategy::pure(set(&[2]));
        assert_eq!(expected_payoff(&g, &p, &q).unwrap(), int(5));
    }

    #[test]
    fn uniform_singletons_guarantee() {
        let g = GameInstance::one_uniform(ints(&[1, 1, 1, 1]), 1).unwrap();
        let p = SearcherStrategy::new((0..4).map(|i| (BoxSet::singleton(i), ratio(1, 4))).collect()).unwrap();
        assert_eq!(guarantee_of_searcher(&g, &p).unwrap(), ratio(3, 4));
    }

    #[test]
    fn oversized_edges_are_always_trapped() {
        let g = GameInstance::complete(ints(&[4, 3, 2, 1]), 3).unwrap();
        let p = SearcherStrategy::pure(set(&[0, 3]));
        assert_eq!(guarantee_of_searcher(&g, &p).unwrap(), int(0));
    }

    #[test]
    fn strategy_validation() {
        assert!(SearcherStrategy::new(vec![(set(&[0]), ratio(1, 2))]).is_err());
        assert!(SearcherStrategy::new(vec![(set(&[0]), ratio(3, 2)), (set(&[1]), ratio(-1, 2))]).is_err());
        assert!(HiderStrategy::new(vec![(set(&[0]), ratio(1, 2)), (set(&[0, 1]), ratio(1, 2))]).is_err());
        assert!(HiderStrategy::new(vec![(set(&[0]), ratio(1, 2)), (set(&[0]), ratio(1, 2))]).is_err());
        let s = SearcherStrategy::new(vec![(set(&[0]), int(1)), (set(&[1]), int(0))]).unwrap();
        assert_eq!(s.atoms().len(), 1);

        let g = GameInstance::complete(ints(&[1, 2, 3]), 2).unwrap();
        assert!(HiderStrategy::pure(set(&[0])).validate(&g).is_err());
        assert!(HiderStrategy::pure(set(&[0, 5])).validate(&g).is_err());
    }

    #[test]
    fn instance_validation_and_order() {
        assert!(GameInstance::complete(ints(&[1]), 1).is_err());
        assert!(GameInstance::complete(ints(&[1, 2]), 2).is_err());
        assert!(GameInstance::complete(ints(&[1, 2]), 0).is_err());
        assert!(GameInstance::complete(ints(&[1, -2]), 1).is_err());
        assert!(GameInstance::new(ints(&[1, 2]), 1, Hypergraph::OneUniform(BoxSet::EMPTY)).is_err());
        assert!(GameInstance::new(ints(&[1, 2]), 1, Hypergraph::OneUniform(set(&[3]))).is_err());
        assert!(GameInstance::new(ints(&[1, 2]), 1, Hypergraph::Explicit(vec![set(&[0]), set(&[0])])).is_err());
        assert!(GameInstance::new(ints(&[1, 2]), 1, Hypergraph::Explicit(vec![BoxSet::EMPTY])).is_err());

        let g = GameInstance::complete(ints(&[3, 5, 3, 7]), 1).unwrap();
        assert_eq!(g.sorted_order(), &[3, 1, 0, 2]);
        assert_eq!(g.sorted_rewards(), ints(&[7, 5, 3, 3]));
    }

    #[test]
    fn complete_edges_are_viable_subsets() {
        let g = GameInstance::complete(ints(&[1, 1, 1, 1]), 2).unwrap();
        assert_eq!(g.searcher_edges(SWEEP_LIMIT).unwrap().len(), 10);
        assert_eq!(g.hider_sets(SWEEP_LIMIT).unwrap().len(), 6);
        assert!(matches!(g.searcher_edges(5), Err(Error::Capacity { .. })));
    }
}
