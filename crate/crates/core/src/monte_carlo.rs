//! Seeded simulation of mixed strategies.
//!
//! Trials are split into fixed blocks of [`BLOCK`] rounds. Block `b` draws
//! from ChaCha8 seeded with the user seed on stream `b`, so a run can be
//! spread over any number of workers and the merged counts are the same.
//! Each block records how often each searcher atom came back untrapped;
//! those integer counts are the sufficient statistic for mean and variance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{self, GameInstance, HiderStrategy, SearcherStrategy};
use crate::rational::{self, Rational};

pub const RNG_ALGORITHM: &str = "chacha8";
pub const BLOCK: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub exact: Rational,
    pub z_score: f64,
    pub seed: u64,
    pub rng: &'static str,
}

impl SimulationReport {
    /// Whether the simulated mean lies within three standard errors of the exact payoff.
    pub fn pass(&self) -> bool {
        let exact = rational::to_f64(&self.exact);
        let slack = 1e-12 * exact.abs().max(1.0);
        (self.mean - exact).abs() <= 3.0 * self.stderr + slack
    }
}

/// Cumulative distribution over atoms, built once from exact probabilities.
struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    fn new<'a>(probs: impl Iterator<Item = &'a Rational>) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = probs
            .map(|p| {
                acc += rational::to_f64(p);
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = f64::INFINITY;
        }
        Sampler { cdf }
    }

    fn draw(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u)
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn block_len(trials: u64, block: u64) -> u64 {
    BLOCK.min(trials - block * BLOCK)
}

pub fn simulate(
    instance: &GameInstance,
    searcher: &SearcherStrategy,
    hider: &HiderStrategy,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    simulate_sharded(instance, searcher, hider, trials, seed, rayon::current_num_threads())
}

/// Same as [`simulate`] but with an explicit worker count; the report does not depend on it.
pub fn simulate_sharded(
    instance: &GameInstance,
    searcher: &SearcherStrategy,
    hider: &HiderStrategy,
    trials: u64,
    seed: u64,
    shards: usize,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::Domain("simulation needs at least one trial".into()));
    }
    let exact = game::expected_payoff(instance, searcher, hider)?;
    let s_atoms = searcher.atoms();
    let h_atoms = hider.atoms();
    let s_pick = Sampler::new(s_atoms.iter().map(|(_, p)| p));
    let h_pick = Sampler::new(h_atoms.iter().map(|(_, p)| p));
    let blocks = trials.div_ceil(BLOCK);
    let shards = shards.clamp(1, blocks as usize) as u64;

    let run_block = |b: u64| -> Vec<u64> {
        let mut rng = block_rng(seed, b);
        let mut wins = vec![0u64; s_atoms.len()];
        for _ in 0..block_len(trials, b) {
            let i = s_pick.draw(&mut rng);
            let j = h_pick.draw(&mut rng);
            if s_atoms[i].0.is_disjoint(h_atoms[j].0) {
                wins[i] += 1;
            }
        }
        wins
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    let wins = (0..shards)
        .into_par_iter()
        .map(|w| {
            (w..blocks)
                .step_by(shards as usize)
                .map(run_block)
                .fold(vec![0u64; s_atoms.len()], merge)
        })
        .reduce(|| vec![0u64; s_atoms.len()], merge);

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for ((edge, _), &w) in s_atoms.iter().zip(&wins) {
        let r = rational::to_f64(&instance.reward_of(*edge));
        sum += w as f64 * r;
        sum_sq += w as f64 * r * r;
    }
    let n = trials as f64;
    let mean = sum / n;
    let variance = if trials > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let stderr = (variance / n).sqrt();
    let diff = mean - rational::to_f64(&exact);
    let z_score = if stderr > 0.0 {
        diff / stderr
    } else if diff.abs() <= 1e-12 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(SimulationReport {
        trials,
        mean,
        stderr,
        exact,
        z_score,
        seed,
        rng: RNG_ALGORITHM,
    })
}

/// Per-box trap frequencies from `trials` draws of the hider mixture.
pub fn empirical_marginals(hider: &HiderStrategy, n: usize, trials: u64, seed: u64) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::Domain("simulation needs at least one trial".into()));
    }
    let atoms = hider.atoms();
    if let Some((set, _)) = atoms.iter().find(|(s, _)| s.iter().any(|i| i >= n)) {
        return Err(Error::InvalidStrategy(format!("trap set {set} reaches past box {}", n - 1)));
    }
    let pick = Sampler::new(atoms.iter().map(|(_, p)| p));
    let counts = (0..trials.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let mut hits = vec![0u64; atoms.len()];
            for _ in 0..block_len(trials, b) {
                hits[pick.draw(&mut rng)] += 1;
            }
            hits
        })
        .reduce(
            || vec![0u64; atoms.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let mut per_box = vec![0u64; n];
    for ((set, _), c) in atoms.iter().zip(counts) {
        for i in set.iter() {
            per_box[i] += c;
        }
    }
    Ok(per_box.into_iter().map(|c| c as f64 / trials as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxset::BoxSet;
    use crate::rational::{int, ratio};

    fn set(v: &[usize]) -> BoxSet {
        v.iter().copied().collect()
    }

    #[test]
    fn point_masses_have_no_variance() {
        let g = GameInstance::complete(vec![int(3), int(2), int(1)], 1).unwrap();
        let s = SearcherStrategy::pure(set(&[0, 1]));
        let h = HiderStrategy::pure(set(&[2]));
        let r = simulate(&g, &s, &h, 1000, 7).unwrap();
        assert_eq!(r.mean, 5.0);
        assert_eq!(r.stderr, 0.0);
        assert_eq!(r.z_score, 0.0);
        assert!(r.pass());
    }

    #[test]
    fn shard_count_does_not_matter() {
        let g = GameInstance::complete(vec![int(5), int(4), int(3)], 1).unwrap();
        let s = SearcherStrategy::new(vec![(set(&[0]), ratio(7, 12)), (set(&[1, 2]), ratio(5, 12))]).unwrap();
        let h = HiderStrategy::new(vec![
            (set(&[0]), ratio(5, 12)),
            (set(&[1]), ratio(4, 12)),
            (set(&[2]), ratio(3, 12)),
        ])
        .unwrap();
        let trials = 3 * BLOCK + 123;
        let a = simulate_sharded(&g, &s, &h, trials, 11, 1).unwrap();
        let b = simulate_sharded(&g, &s, &h, trials, 11, 4).unwrap();
        let c = simulate_sharded(&g, &s, &h, trials, 11, 64).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.exact, ratio(35, 12));
        assert_ne!(a, simulate_sharded(&g, &s, &h, trials, 12, 1).unwrap());
    }

    #[test]
    fn marginal_frequencies() {
        let h = HiderStrategy::pure(set(&[0, 1]));
        assert_eq!(empirical_marginals(&h, 4, 100, 1).unwrap(), vec![1.0, 1.0, 0.0, 0.0]);
        assert!(empirical_marginals(&h, 1, 100, 1).is_err());
        assert!(empirical_marginals(&h, 4, 0, 1).is_err());
    }
}
