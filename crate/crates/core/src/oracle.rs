//! Brute-force ground truth: enumerate pure strategies, build the payoff
//! matrix, and solve it exactly. Also hosts the solver dispatcher.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::boxset::{self, BoxSet};
use crate::equal;
use crate::error::{Error, Result};
use crate::game::{self, Certificates, GameInstance, HiderStrategy, Method, SearcherStrategy, Solution};
use crate::k1;
use crate::n4k2;
use crate::one_uniform;
use crate::rational::Rational;
use crate::simplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_boxes: usize,
    pub max_rows: u128,
    pub max_cols: u128,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_boxes: 12,
            max_rows: 50_000,
            max_cols: 50_000,
        }
    }
}

/// Searcher edges and hider trap sets the oracle plays over.
pub fn enumerate_pure_strategies(
    instance: &GameInstance,
    limits: &OracleLimits,
) -> Result<(Vec<BoxSet>, Vec<BoxSet>)> {
    let n = instance.n();
    if n > limits.max_boxes {
        return Err(Error::capacity("number of boxes for the LP oracle", n as u128, limits.max_boxes as u128));
    }
    let cols = boxset::count_k_subsets(n, instance.k());
    if cols > limits.max_cols {
        return Err(Error::capacity("number of hider pure strategies", cols, limits.max_cols));
    }
    let rows = instance.searcher_edges(limits.max_rows)?;
    Ok((rows, instance.hider_sets(limits.max_cols)?))
}

/// Exact payoffs, searcher edges by row and trap sets by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffMatrix {
    pub rows: Vec<BoxSet>,
    pub cols: Vec<BoxSet>,
    pub entries: Vec<Vec<Rational>>,
}

impl PayoffMatrix {
    pub fn build(instance: &GameInstance, limits: &OracleLimits) -> Result<Self> {
        let (rows, cols) = enumerate_pure_strategies(instance, limits)?;
        let entries = rows
            .par_iter()
            .map(|&s| cols.iter().map(|&h| game::raw_payoff(instance, s, h)).collect())
            .collect();
        Ok(PayoffMatrix { rows, cols, entries })
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }
}

/// Solves the matrix game and certifies both strategies against the matrix.
pub fn solve_lp(matrix: &PayoffMatrix) -> Result<Solution> {
    if matrix.rows.is_empty() || matrix.cols.is_empty() {
        return Err(Error::Domain("payoff matrix is empty".into()));
    }
    let lp = simplex::solve_matrix_game(&matrix.entries);
    let searcher = SearcherStrategy::new(
        matrix.rows.iter().copied().zip(lp.row_strategy.iter().cloned()).collect(),
    )?;
    let hider = HiderStrategy::new(
        matrix.cols.iter().copied().zip(lp.col_strategy.iter().cloned()).collect(),
    )?;

    let searcher_payoffs: Vec<(BoxSet, Rational)> = (0..matrix.cols.len())
        .map(|j| {
            let v = (0..matrix.rows.len())
                .filter(|&i| !lp.row_strategy[i].is_zero())
                .map(|i| &lp.row_strategy[i] * matrix.entry(i, j))
                .sum();
            (matrix.cols[j], v)
        })
        .collect();
    let hider_payoffs: Vec<(BoxSet, Rational)> = (0..matrix.rows.len())
        .map(|i| {
            let v = (0..matrix.cols.len())
                .filter(|&j| !lp.col_strategy[j].is_zero())
                .map(|j| &lp.col_strategy[j] * matrix.entry(i, j))
                .sum();
            (matrix.rows[i], v)
        })
        .collect();
    let searcher_guarantee = searcher_payoffs.iter().map(|(_, v)| v).min().cloned().unwrap_or_default();
    let hider_guarantee = hider_payoffs
        .iter()
        .map(|(_, v)| v)
        .max()
        .cloned()
        .unwrap_or_default()
        .max(Rational::zero());
    debug_assert_eq!(searcher_guarantee, lp.value);
    debug_assert_eq!(hider_guarantee, lp.value);

    let mut solution = Solution::new(lp.value, searcher, hider, Method::LpOracle);
    solution.certificates = Some(Certificates {
        searcher_payoffs,
        hider_payoffs,
        searcher_guarantee,
        hider_guarantee,
    });
    Ok(solution)
}

pub fn solve_oracle(instance: &GameInstance) -> Result<Solution> {
    solve_oracle_with_limits(instance, &OracleLimits::default())
}

pub fn solve_oracle_with_limits(instance: &GameInstance, limits: &OracleLimits) -> Result<Solution> {
    solve_lp(&PayoffMatrix::build(instance, limits)?)
}

/// Closed form that covers `instance`, if any.
pub fn closed_form_for(instance: &GameInstance) -> Option<Method> {
    let n = instance.n();
    let k = instance.k();
    if instance.is_one_uniform() || (k + 1 == n && !instance.singleton_edges().is_empty()) {
        return Some(Method::OneUniform);
    }
    if !instance.is_complete() {
        return None;
    }
    if instance.all_rewards_equal() && instance.reward(0).is_positive() {
        Some(Method::EqualRewards)
    } else if k == 1 {
        Some(Method::KEquals1)
    } else if n == 4 && k == 2 && instance.rewards().iter().all(Signed::is_positive) {
        Some(Method::N4K2)
    } else {
        None
    }
}

/// Routes to the matching closed form, else to the LP oracle, and certifies
/// the result whenever the deviation sweeps fit their limits.
pub fn solve_any(instance: &GameInstance) -> Result<Solution> {
    match closed_form_for(instance) {
        Some(method) => solve_with(instance, method),
        None => solve_with(instance, Method::LpOracle).map_err(|e| match e {
            Error::Capacity { what, count, limit } => Error::Capacity {
                what: if what.contains("LP oracle") {
                    what
                } else {
                    "no closed form applies and the LP oracle limit is exceeded"
                },
                count,
                limit,
            },
            other => other,
        }),
    }
}

pub fn solve_with(instance: &GameInstance, method: Method) -> Result<Solution> {
    let mut solution = match method {
        Method::OneUniform => one_uniform::solve_one_uniform(instance)?.to_solution(),
        Method::EqualRewards => equal::solve_equal_instance(instance)?.to_solution()?,
        Method::KEquals1 => k1::solve_k1(instance)?,
        Method::N4K2 => n4k2::solve_n4k2(instance)?,
        Method::LpOracle => return solve_oracle(instance),
    };
    match solution.certify(instance) {
        Ok(_) | Err(Error::Capacity { .. }) => Ok(solution),
        Err(e) => Err(e),
    }
}
