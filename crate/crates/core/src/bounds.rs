//! General value bounds and the partition-form strategy checker.
//!
//! A partition-form searcher strategy picks a family of edges `S_1..S_t` and
//! plays `S_j` with probability `λ / r(S_j)`, where `λ = 1/Σ 1/r(S_j)`. Every
//! untrapped edge then contributes exactly `λ`, so the strategy guarantees
//! `m·λ` with `m` the fewest untrapped edges over all trap placements.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::boxset::{self, BoxSet};
use crate::error::{Error, Result};
use crate::game::{GameInstance, SearcherStrategy};
use crate::oracle;
use crate::rational::{self, Rational};

/// Deviation sweeps in this module refuse to enumerate more trap sets than this.
pub const HIDER_SWEEP_LIMIT: u128 = 100_000;

/// `R0/(k+1) · (1 - 1/(k+1))^k`, an upper bound on the value of any instance.
pub fn upper_bound(instance: &GameInstance) -> Rational {
    let k = instance.k() as i64;
    independent_factor(k) * instance.total_reward()
}

/// The guarantee of opening every box independently with probability
/// `1/(k+1)`: `R0/(k+1) · (1 - 1/(k+1))^k · (1 - r([k])/R0)`.
pub fn lower_bound_independent(instance: &GameInstance) -> Result<Rational> {
    require_complete(instance, "the independent-open lower bound")?;
    let k = instance.k();
    let top_k: Rational = instance.sorted_rewards().into_iter().take(k).sum();
    Ok(independent_factor(k as i64) * (instance.total_reward() - top_k))
}

fn independent_factor(k: i64) -> Rational {
    let p = rational::ratio(1, k + 1);
    let q = Rational::one() - &p;
    p * rational::pow(&q, k as u32)
}

fn require_complete(instance: &GameInstance, what: &str) -> Result<()> {
    if !instance.is_complete() {
        return Err(Error::Regime(format!("{what} requires the complete hypergraph")));
    }
    Ok(())
}

/// Guarantee of opening each box independently with probability `p`, found by
/// summing over every opened set against every trap placement.
pub fn independent_open_guarantee(instance: &GameInstance, p: &Rational) -> Result<Rational> {
    require_complete(instance, "independent opening")?;
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::Domain(format!("opening probability {p} is outside [0, 1]")));
    }
    let n = instance.n();
    if n > 16 {
        return Err(Error::capacity("boxes for the independent-open sweep", n as u128, 16u128));
    }
    let q = Rational::one() - p;
    let by_size: Vec<Rational> = (0..=n as u32)
        .map(|s| rational::pow(p, s) * rational::pow(&q, n as u32 - s))
        .collect();
    let hiders = instance.hider_sets(HIDER_SWEEP_LIMIT)?;
    let guarantees: Vec<Rational> = hiders
        .par_iter()
        .map(|&h| {
            let free = h.complement(n);
            // Subsets of the untrapped boxes, via the standard submask walk.
            let mut sum = Rational::zero();
            let mut sub = free.bits();
            loop {
                let s = BoxSet::from_bits(sub);
                if !s.is_empty() {
                    sum += &by_size[s.len()] * instance.reward_of(s);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free.bits();
            }
            sum
        })
        .collect();
    Ok(guarantees.into_iter().min().unwrap_or_default())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionStrategySpec {
    pub edges: Vec<BoxSet>,
    /// `r(S_j)` for each edge, in the same order.
    pub edge_rewards: Vec<Rational>,
    pub lambda: Rational,
    pub m: usize,
    pub guaranteed: Rational,
}

impl PartitionStrategySpec {
    /// `λ / r(S_j)` for each edge; these sum to one.
    pub fn probabilities(&self) -> Vec<Rational> {
        self.edge_rewards.iter().map(|r| &self.lambda / r).collect()
    }

    pub fn to_searcher(&self) -> Result<SearcherStrategy> {
        SearcherStrategy::new(self.edges.iter().copied().zip(self.probabilities()).collect())
    }
}

/// Evaluates the partition-form strategy on `edges`. When the edges are
/// pairwise disjoint, checks that the sweep found `m = max(t - k, 0)`.
pub fn partition_bound(instance: &GameInstance, edges: &[BoxSet]) -> Result<PartitionStrategySpec> {
    if edges.is_empty() {
        return Err(Error::InvalidStrategy("a partition-form strategy needs at least one edge".into()));
    }
    let mut edge_rewards = Vec::with_capacity(edges.len());
    for (j, &e) in edges.iter().enumerate() {
        if edges[..j].contains(&e) {
            return Err(Error::InvalidStrategy(format!("edge {e} is listed twice")));
        }
        if !instance.is_edge(e) {
            return Err(Error::InvalidStrategy(format!("{e} is not an edge of the hypergraph")));
        }
        let r = instance.reward_of(e);
        if !r.is_positive() {
            return Err(Error::InvalidStrategy(format!("edge {e} has zero reward")));
        }
        edge_rewards.push(r);
    }
    let hiders = instance.hider_sets(HIDER_SWEEP_LIMIT)?;
    let m = min_untrapped(edges, &hiders);
    let pairwise_disjoint = edges
        .iter()
        .enumerate()
        .all(|(i, a)| edges[i + 1..].iter().all(|b| a.is_disjoint(*b)));
    if pairwise_disjoint && m != edges.len().saturating_sub(instance.k()) {
        return Err(Error::Domain(format!(
            "disjoint family of {} edges left {m} untrapped, expected {}",
            edges.len(),
            edges.len().saturating_sub(instance.k())
        )));
    }
    let lambda = rational::harmonic_inverse(edge_rewards.iter())
        .ok_or_else(|| Error::Domain("edge rewards must be positive".into()))?;
    let guaranteed = &lambda * Rational::from_integer(m.into());
    Ok(PartitionStrategySpec {
        edges: edges.to_vec(),
        edge_rewards,
        lambda,
        m,
        guaranteed,
    })
}

fn min_untrapped(edges: &[BoxSet], hiders: &[BoxSet]) -> usize {
    hiders
        .iter()
        .map(|&h| edges.iter().filter(|e| e.is_disjoint(h)).count())
        .min()
        .unwrap_or(edges.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjectureOptions {
    /// Largest family enumerated exhaustively.
    pub max_support: usize,
    /// Total number of families the exhaustive stage may evaluate.
    pub budget: u64,
    /// Before the exhaustive stage, try every family made of all `m`-subsets
    /// of the `t` largest boxes that has at most this many edges (0 skips).
    pub max_layer_edges: u128,
}

impl Default for ConjectureOptions {
    fn default() -> Self {
        ConjectureOptions {
            max_support: 8,
            budget: 1_000_000,
            max_layer_edges: 5_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    /// Found by the exhaustive search over small families.
    Exhaustive,
    /// A full `m`-subset layer of the top boxes.
    Layer { top: usize, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub lp_value: Rational,
    /// Best partition-form guarantee seen; zero if no family has a positive guarantee.
    pub best: Rational,
    pub gap: Rational,
    pub witness: Option<PartitionStrategySpec>,
    pub source: Option<WitnessSource>,
    pub families_examined: u64,
    /// False when the budget cut the exhaustive stage short before a zero gap was found.
    pub complete: bool,
}

impl ConjectureReport {
    pub fn is_consistent(&self) -> bool {
        self.gap.is_zero()
    }

    pub fn verdict(&self) -> &'static str {
        match (self.is_consistent(), self.complete) {
            (true, _) => "consistent",
            (false, true) => "gap",
            (false, false) => "incomplete",
        }
    }
}

pub fn check_conjecture(instance: &GameInstance, max_support: usize) -> Result<ConjectureReport> {
    check_conjecture_with(
        instance,
        &ConjectureOptions {
            max_support,
            ..Default::default()
        },
    )
}

/// Compares the exact game value with the best partition-form guarantee.
/// Layers go first, then families by increasing size and lexicographically
/// by edge index; the search stops at the first size that closes the gap.
pub fn check_conjecture_with(instance: &GameInstance, options: &ConjectureOptions) -> Result<ConjectureReport> {
    let lp_value = oracle::solve_oracle(instance)?.value;
    let mut search = Search::new(instance, lp_value)?;

    search.try_layers(options.max_layer_edges)?;
    let mut complete = true;
    let mut size = 1;
    while !search.closed() && size <= options.max_support.min(search.edges.len()) {
        let left = options.budget.saturating_sub(search.examined_exhaustive);
        if !search.try_size(size, left)? {
            complete = false;
            break;
        }
        size += 1;
    }

    let gap = &search.lp_value - &search.best;
    if gap.is_negative() {
        return Err(Error::Domain(format!(
            "partition-form guarantee {} exceeds the game value {}",
            search.best, search.lp_value
        )));
    }
    let complete = complete || gap.is_zero();
    Ok(ConjectureReport {
        lp_value: search.lp_value,
        best: search.best,
        gap,
        witness: search.witness,
        source: search.source,
        families_examined: search.examined,
        complete,
    })
}

const CHUNK: usize = 1 << 14;

struct Search<'a> {
    instance: &'a GameInstance,
    lp_value: Rational,
    edges: Vec<BoxSet>,
    rewards: Vec<f64>,
    /// `disjoint[e][h]` is 1 when edge `e` misses trap set `h`.
    disjoint: Vec<Vec<u8>>,
    best: Rational,
    best_f: f64,
    witness: Option<PartitionStrategySpec>,
    source: Option<WitnessSource>,
    examined: u64,
    examined_exhaustive: u64,
}

impl<'a> Search<'a> {
    fn new(instance: &'a GameInstance, lp_value: Rational) -> Result<Self> {
        let hiders = instance.hider_sets(HIDER_SWEEP_LIMIT)?;
        let edges: Vec<BoxSet> = instance
            .searcher_edges(oracle::OracleLimits::default().max_rows)?
            .into_iter()
            .filter(|&e| instance.reward_of(e).is_positive())
            .collect();
        let rewards = edges.iter().map(|&e| rational::to_f64(&instance.reward_of(e))).collect();
        let disjoint = edges
            .iter()
            .map(|e| hiders.iter().map(|h| e.is_disjoint(*h) as u8).collect())
            .collect();
        Ok(Search {
            instance,
            lp_value,
            edges,
            rewards,
            disjoint,
            best: Rational::zero(),
            best_f: 0.0,
            witness: None,
            source: None,
            examined: 0,
            examined_exhaustive: 0,
        })
    }

    fn closed(&self) -> bool {
        self.best == self.lp_value
    }

    /// Keeps `family` if its exact guarantee beats the best so far.
    fn offer(&mut self, family: &[BoxSet], source: WitnessSource) -> Result<()> {
        let spec = partition_bound(self.instance, family)?;
        if spec.guaranteed > self.best {
            self.best = spec.guaranteed.clone();
            self.best_f = rational::to_f64(&self.best);
            self.witness = Some(spec);
            self.source = Some(source);
        }
        Ok(())
    }

    fn try_layers(&mut self, max_edges: u128) -> Result<()> {
        let n = self.instance.n();
        let order = self.instance.sorted_order().to_vec();
        for top in 1..=n {
            for size in 1..=top.min(n - self.instance.k()) {
                if boxset::count_k_subsets(top, size) > max_edges {
                    continue;
                }
                let family: Vec<BoxSet> = boxset::k_subsets(top, size)
                    .map(|s| s.map_through(&order))
                    .collect();
                if family
                    .iter()
                    .any(|&e| !self.instance.is_edge(e) || !self.instance.reward_of(e).is_positive())
                {
                    continue;
                }
                self.examined += 1;
                self.offer(&family, WitnessSource::Layer { top, size })?;
                if self.closed() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// Evaluates families of `size` edges in lexicographic order, at most
    /// `budget` of them. Returns false if the budget ran out first.
    fn try_size(&mut self, size: usize, budget: u64) -> Result<bool> {
        let mut combos = Combinations::new(self.edges.len(), size);
        let mut left = budget;
        loop {
            let take = (CHUNK as u64).min(left) as usize;
            let chunk: Vec<Vec<usize>> = combos.by_ref().take(take).collect();
            if chunk.is_empty() {
                return Ok(true);
            }
            left -= chunk.len() as u64;
            self.examined += chunk.len() as u64;
            self.examined_exhaustive += chunk.len() as u64;

            // Cheap floating screen in parallel; exact confirmation in order.
            let scores: Vec<f64> = chunk.par_iter().map(|c| self.score(c)).collect();
            for (c, score) in chunk.iter().zip(scores) {
                if score >= self.best_f * (1.0 - 1e-9) && score > 0.0 {
                    let family: Vec<BoxSet> = c.iter().map(|&i| self.edges[i]).collect();
                    self.offer(&family, WitnessSource::Exhaustive)?;
                }
            }
            if left == 0 {
                return Ok(combos.next().is_none());
            }
        }
    }

    fn score(&self, family: &[usize]) -> f64 {
        let mut counts = self.disjoint[family[0]].clone();
        for &e in &family[1..] {
            for (c, d) in counts.iter_mut().zip(&self.disjoint[e]) {
                *c += d;
            }
        }
        let m = counts.iter().copied().min().unwrap_or(0);
        if m == 0 {
            return 0.0;
        }
        let inv: f64 = family.iter().map(|&e| 1.0 / self.rewards[e]).sum();
        m as f64 / inv
    }
}

/// `size`-combinations of `0..n` as index vectors, lexicographically.
struct Combinations {
    n: usize,
    idx: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, size: usize) -> Self {
        Combinations {
            n,
            idx: (size >= 1 && size <= n).then(|| (0..size).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let idx = self.idx.as_mut()?;
        let out = idx.clone();
        let k = idx.len();
        match (0..k).rev().find(|&i| idx[i] < self.n - k + i) {
            Some(i) => {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            None => self.idx = None,
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Hypergraph;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn set(v: &[usize]) -> BoxSet {
        v.iter().copied().collect()
    }

    #[test]
    fn bound_examples() {
        let g = GameInstance::complete(vec![int(1); 6], 2).unwrap();
        assert_eq!(upper_bound(&g), ratio(8, 9));
        assert_eq!(lower_bound_independent(&g).unwrap(), ratio(16, 27));
        let g = GameInstance::complete(ints(&[1, 1]), 1).unwrap();
        assert_eq!(upper_bound(&g), ratio(1, 2));
        let g = GameInstance::complete(ints(&[10, 10, 10, 1]), 2).unwrap();
        assert_eq!(upper_bound(&g), ratio(124, 27));
        assert_eq!(lower_bound_independent(&g).unwrap(), ratio(44, 27));
        let g = GameInstance::one_uniform(ints(&[3, 2, 1]), 1).unwrap();
        assert!(matches!(lower_bound_independent(&g), Err(Error::Regime(_))));
    }

    #[test]
    fn independent_sweep_matches_closed_form() {
        let g = GameInstance::complete(ints(&[7, 5, 3, 2, 2]), 2).unwrap();
        let p = ratio(1, 3);
        assert_eq!(independent_open_guarantee(&g, &p).unwrap(), lower_bound_independent(&g).unwrap());
        assert!(independent_open_guarantee(&g, &ratio(3, 2)).is_err());
    }

    #[test]
    fn partition_bound_examples() {
        let g = GameInstance::one_uniform(ints(&[10, 10, 1]), 1).unwrap();
        let s = partition_bound(&g, &[set(&[0]), set(&[1])]).unwrap();
        assert_eq!((s.m, s.guaranteed.clone()), (1, int(5)));

        let g = GameInstance::complete(ints(&[10, 10, 1]), 1).unwrap();
        let s = partition_bound(&g, &[set(&[0]), set(&[1, 2])]).unwrap();
        assert_eq!(s.lambda, ratio(110, 21));
        assert_eq!(s.m, 1);
        assert_eq!(s.guaranteed, ratio(110, 21));
        assert_eq!(s.probabilities().iter().sum::<Rational>(), int(1));

        let s = partition_bound(&g, &[set(&[0, 1]), set(&[1, 2])]).unwrap();
        assert_eq!(s.m, 0);

        assert!(partition_bound(&g, &[]).is_err());
        assert!(partition_bound(&g, &[set(&[0]), set(&[0])]).is_err());
        let g = GameInstance::complete(ints(&[10, 0, 1]), 1).unwrap();
        assert!(partition_bound(&g, &[set(&[1])]).is_err());
    }

    #[test]
    fn conjecture_examples() {
        let g = GameInstance::complete(ints(&[10, 10, 1]), 1).unwrap();
        let r = check_conjecture(&g, 8).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.lp_value, ratio(110, 21));

        let g = GameInstance::complete(vec![int(1); 4], 2).unwrap();
        let r = check_conjecture(&g, 8).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.best, ratio(1, 2));
        assert_eq!(r.witness.unwrap().edges.len(), 4);

        let g = GameInstance::complete(ints(&[10, 10, 10, 1]), 2).unwrap();
        let opts = ConjectureOptions { max_layer_edges: 0, ..Default::default() };
        let r = check_conjecture_with(&g, &opts).unwrap();
        assert!(r.is_consistent());
        let mut edges = r.witness.unwrap().edges;
        edges.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
        assert_eq!(edges, vec![set(&[0]), set(&[1]), set(&[2]), set(&[0, 3]), set(&[1, 3]), set(&[2, 3])]);
    }

    #[test]
    fn budget_marks_incomplete() {
        let g = GameInstance::complete(vec![int(1); 6], 2).unwrap();
        let opts = ConjectureOptions { max_support: 3, budget: 50, max_layer_edges: 0 };
        let r = check_conjecture_with(&g, &opts).unwrap();
        assert!(!r.is_consistent());
        assert!(!r.complete);
        assert_eq!(r.verdict(), "incomplete");
        assert!(r.best <= r.lp_value);
    }

    #[test]
    fn explicit_hypergraph() {
        let edges = vec![set(&[0, 1]), set(&[2]), set(&[1, 2])];
        let g = GameInstance::new(ints(&[3, 2, 4]), 1, Hypergraph::Explicit(edges)).unwrap();
        let r = check_conjecture(&g, 3).unwrap();
        assert!(r.best <= r.lp_value);
        assert!(r.complete);
    }

    #[test]
    fn combinations_order() {
        let v: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(v, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 4).count(), 0);
    }
}
