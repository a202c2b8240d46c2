//! Four boxes, two traps, complete hypergraph.
//!
//! Rewards are taken in sorted order `r1 >= r2 >= r3 >= r4 > 0`. One of three
//! searcher strategies is optimal:
//!
//! * A: the four singletons, weights `∝ 1/r_i`.
//! * B: `{1}`, `{2}`, `{3,4}`, weights `∝` reciprocal edge reward.
//! * C: `{1}`, `{2}`, `{3}`, `{1,4}`, `{2,4}`, `{3,4}`, same weighting.
//!
//! The value is `max(vA, vB, vC)`. The hider's optimal mixture is explicit
//! for C; for A and B it is any point of a two-variable linear feasibility
//! region, from which [`FeasibilityBox::pick`] takes a fixed corner.

use num_traits::{Signed, Zero};

use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::game::{GameInstance, HiderStrategy, Method, SearcherStrategy, Solution};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcValues {
    pub va: Rational,
    pub vb: Rational,
    pub vc: Rational,
    /// Regime attaining the maximum; ties resolve A, then B, then C.
    pub chosen: Regime,
}

impl AbcValues {
    pub fn value(&self) -> &Rational {
        match self.chosen {
            Regime::A => &self.va,
            Regime::B => &self.vb,
            Regime::C => &self.vc,
        }
    }
}

/// Reciprocals used throughout: `inv[i] = 1/r_i`, `pair(i,j) = 1/(r_i + r_j)`.
struct Recip<'a> {
    r: &'a [Rational; 4],
    inv: [Rational; 4],
}

impl<'a> Recip<'a> {
    fn new(r: &'a [Rational; 4]) -> Result<Self> {
        if r.iter().any(|x| !x.is_positive()) {
            return Err(Error::Domain(
                "n4k2 closed forms need strictly positive rewards".into(),
            ));
        }
        if r.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain("rewards must be sorted in non-increasing order".into()));
        }
        Ok(Recip {
            r,
            inv: [r[0].recip(), r[1].recip(), r[2].recip(), r[3].recip()],
        })
    }

    fn pair(&self, i: usize, j: usize) -> Rational {
        (&self.r[i] + &self.r[j]).recip()
    }

    fn va(&self) -> Rational {
        let s: Rational = self.inv.iter().sum();
        two() / s
    }

    fn vb(&self) -> Rational {
        (&self.inv[0] + &self.inv[1] + self.pair(2, 3)).recip()
    }

    fn vc(&self) -> Rational {
        let s = &self.inv[0] + &self.inv[1] + &self.inv[2] + self.pair(0, 3) + self.pair(1, 3) + self.pair(2, 3);
        two() / s
    }

    /// `vA >= vB`.
    fn a_beats_b(&self) -> bool {
        &self.inv[0] + &self.inv[1] >= &self.inv[2] + &self.inv[3] - two() * self.pair(2, 3)
    }

    /// `vA >= vC`.
    fn a_beats_c(&self) -> bool {
        self.inv[3] <= self.pair(0, 3) + self.pair(1, 3) + self.pair(2, 3)
    }

    /// `vB >= vC`.
    fn b_beats_c(&self) -> bool {
        &self.inv[0] + &self.inv[1] + self.pair(2, 3) <= &self.inv[2] + self.pair(0, 3) + self.pair(1, 3)
    }

    fn b_beats_a(&self) -> bool {
        &self.inv[0] + &self.inv[1] <= &self.inv[2] + &self.inv[3] - two() * self.pair(2, 3)
    }

    fn c_beats_a(&self) -> bool {
        self.pair(0, 3) + self.pair(1, 3) + self.pair(2, 3) <= self.inv[3]
    }

    fn c_beats_b(&self) -> bool {
        &self.inv[0] + &self.inv[1] + self.pair(2, 3) >= &self.inv[2] + self.pair(0, 3) + self.pair(1, 3)
    }
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn pair(i: usize, j: usize) -> BoxSet {
    BoxSet::singleton(i).with(j)
}

pub fn abc_values(r: &[Rational; 4]) -> Result<AbcValues> {
    let rc = Recip::new(r)?;
    let (va, vb, vc) = (rc.va(), rc.vb(), rc.vc());
    let chosen = if va >= vb && va >= vc {
        Regime::A
    } else if vb >= vc {
        Regime::B
    } else {
        Regime::C
    };
    Ok(AbcValues { va, vb, vc, chosen })
}

/// `vA >= vB` stated through the reciprocal inequality.
pub fn a_over_b_condition(r: &[Rational; 4]) -> Result<bool> {
    Ok(Recip::new(r)?.a_beats_b())
}

/// `vA >= vC` stated through the reciprocal inequality.
pub fn a_over_c_condition(r: &[Rational; 4]) -> Result<bool> {
    Ok(Recip::new(r)?.a_beats_c())
}

/// `vB >= vC` stated through the reciprocal inequality.
pub fn b_over_c_condition(r: &[Rational; 4]) -> Result<bool> {
    Ok(Recip::new(r)?.b_beats_c())
}

/// Searcher strategy for `values.chosen`, over sorted positions `0..4`.
pub fn searcher_strategy(r: &[Rational; 4], values: &AbcValues) -> Result<SearcherStrategy> {
    Recip::new(r)?;
    let edges: Vec<BoxSet> = match values.chosen {
        Regime::A => (0..4).map(BoxSet::singleton).collect(),
        Regime::B => vec![BoxSet::singleton(0), BoxSet::singleton(1), pair(2, 3)],
        Regime::C => vec![
            BoxSet::singleton(0),
            BoxSet::singleton(1),
            BoxSet::singleton(2),
            pair(0, 3),
            pair(1, 3),
            pair(2, 3),
        ],
    };
    let weights: Vec<Rational> = edges
        .iter()
        .map(|e| e.iter().map(|i| &r[i]).sum::<Rational>().recip())
        .collect();
    let norm: Rational = weights.iter().sum();
    SearcherStrategy::new(edges.into_iter().zip(weights).map(|(e, w)| (e, w / &norm)).collect())
}

fn check_value(given: &Rational, expected: Rational, name: &str) -> Result<()> {
    if *given != expected {
        return Err(Error::Domain(format!("{name} = {given} does not match the rewards ({expected})")));
    }
    Ok(())
}

/// Explicit equalizing hider mixture for regime C, over sorted positions.
pub fn hider_strategy_c(r: &[Rational; 4], vc: &Rational) -> Result<HiderStrategy> {
    let rc = Recip::new(r)?;
    check_value(vc, rc.vc(), "vC")?;
    if !(rc.c_beats_a() && rc.c_beats_b()) {
        return Err(Error::Regime("strategy C is not optimal for these rewards".into()));
    }
    let one = Rational::from_integer(1.into());
    let q12 = vc * rc.pair(2, 3);
    let q13 = vc * rc.pair(1, 3);
    let q23 = vc * rc.pair(0, 3);
    let q14 = &one - &q13 - &q12 - vc * &rc.inv[0];
    let q24 = &one - &q23 - &q12 - vc * &rc.inv[1];
    let q34 = &one - &q23 - &q13 - vc * &rc.inv[2];
    HiderStrategy::new(vec![
        (pair(0, 1), q12),
        (pair(0, 2), q13),
        (pair(0, 3), q14),
        (pair(1, 2), q23),
        (pair(1, 3), q24),
        (pair(2, 3), q34),
    ])
}

/// Bounds on two auxiliary variables `x`, `y` and on their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityBox {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
    pub sum_lo: Rational,
    pub sum_hi: Rational,
}

impl FeasibilityBox {
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let s = x + y;
        self.x_lo <= *x
            && *x <= self.x_hi
            && self.y_lo <= *y
            && *y <= self.y_hi
            && self.sum_lo <= s
            && s <= self.sum_hi
    }

    pub fn is_nonempty(&self) -> bool {
        self.x_lo <= self.x_hi
            && self.y_lo <= self.y_hi
            && self.sum_lo <= self.sum_hi
            && &self.x_lo + &self.y_lo <= self.sum_hi
            && &self.x_hi + &self.y_hi >= self.sum_lo
    }

    /// The feasible point with the smallest sum, then the smallest `x`:
    /// `x` starts at its lower bound, `y` rises to meet the sum bound, and
    /// `x` takes up whatever `y` cannot.
    pub fn pick(&self) -> Option<(Rational, Rational)> {
        if !self.is_nonempty() {
            return None;
        }
        let s = (&self.x_lo + &self.y_lo).max(self.sum_lo.clone());
        let x = self.x_lo.clone().max(&s - &self.y_hi);
        let y = &s - &x;
        debug_assert!(self.contains(&x, &y));
        Some((x, y))
    }
}

fn max_of(a: Rational, b: Rational) -> Rational {
    a.max(b)
}

fn min_of(a: Rational, b: Rational) -> Rational {
    a.min(b)
}

/// Region for `x = q13/vB`, `y = q23/vB` with `q12 = vB/(r3+r4)` and `q34 = 0`.
pub fn feasibility_box_b(r: &[Rational; 4]) -> Result<FeasibilityBox> {
    let rc = Recip::new(r)?;
    let i = &rc.inv;
    Ok(FeasibilityBox {
        x_lo: max_of(Rational::zero(), &i[1] - rc.pair(1, 2)),
        x_hi: min_of(rc.pair(1, 3), i[1].clone()),
        y_lo: max_of(Rational::zero(), &i[0] - rc.pair(0, 2)),
        y_hi: min_of(rc.pair(0, 3), i[0].clone()),
        sum_lo: &i[0] + &i[1] - &i[2] + rc.pair(2, 3),
        sum_hi: &i[3] - rc.pair(2, 3),
    })
}

pub fn hider_strategy_b(r: &[Rational; 4], vb: &Rational) -> Result<HiderStrategy> {
    let rc = Recip::new(r)?;
    check_value(vb, rc.vb(), "vB")?;
    if !(rc.b_beats_a() && rc.b_beats_c()) {
        return Err(Error::Regime("strategy B is not optimal for these rewards".into()));
    }
    let region = feasibility_box_b(r)?;
    let (x, y) = region
        .pick()
        .expect("feasibility region is nonempty whenever strategy B is optimal");
    HiderStrategy::new(vec![
        (pair(0, 1), vb * rc.pair(2, 3)),
        (pair(0, 2), vb * &x),
        (pair(0, 3), vb * (&rc.inv[1] - &x)),
        (pair(1, 2), vb * &y),
        (pair(1, 3), vb * (&rc.inv[0] - &y)),
    ])
}

/// Offsets linking `q12`, `q13`, `q14` to `x = q34/vA` and `y = q24/vA`.
fn a_offsets(rc: &Recip) -> (Rational, Rational, Rational) {
    let i = &rc.inv;
    let h = half();
    let alpha = &h * (-&i[0] - &i[1] + &i[2] + &i[3]);
    let beta = &h * (-&i[0] + &i[1] - &i[2] + &i[3]);
    let gamma = &h * (&i[0] + &i[1] + &i[2] - &i[3]);
    (alpha, beta, gamma)
}

/// Region for `x = q34/vA`, `y = q24/vA` where every singleton pays exactly vA.
pub fn feasibility_box_a(r: &[Rational; 4]) -> Result<FeasibilityBox> {
    let rc = Recip::new(r)?;
    let (alpha, beta, gamma) = a_offsets(&rc);
    let i = &rc.inv;
    Ok(FeasibilityBox {
        x_lo: max_of(Rational::zero(), -&alpha),
        x_hi: min_of(rc.pair(0, 1), rc.pair(2, 3) - &alpha),
        y_lo: max_of(Rational::zero(), -&beta),
        y_hi: min_of(rc.pair(0, 2), rc.pair(1, 3) - &beta),
        sum_lo: max_of(&i[0] - rc.pair(0, 3), &gamma - rc.pair(1, 2)),
        sum_hi: min_of(i[0].clone(), gamma),
    })
}

pub fn hider_strategy_a(r: &[Rational; 4], va: &Rational) -> Result<HiderStrategy> {
    let rc = Recip::new(r)?;
    check_value(va, rc.va(), "vA")?;
    if !(rc.a_beats_b() && rc.a_beats_c()) {
        return Err(Error::Regime("strategy A is not optimal for these rewards".into()));
    }
    let region = feasibility_box_a(r)?;
    let (x, y) = region
        .pick()
        .expect("feasibility region is nonempty whenever strategy A is optimal");
    let (alpha, beta, gamma) = a_offsets(&rc);
    let s = &x + &y;
    HiderStrategy::new(vec![
        (pair(0, 1), va * (&x + alpha)),
        (pair(0, 2), va * (&y + beta)),
        (pair(0, 3), va * (gamma - &s)),
        (pair(1, 2), va * (&rc.inv[0] - &s)),
        (pair(1, 3), va * &y),
        (pair(2, 3), va * &x),
    ])
}

pub fn hider_strategy(r: &[Rational; 4], values: &AbcValues) -> Result<HiderStrategy> {
    match values.chosen {
        Regime::A => hider_strategy_a(r, &values.va),
        Regime::B => hider_strategy_b(r, &values.vb),
        Regime::C => hider_strategy_c(r, &values.vc),
    }
}

#[derive(Clone, Debug)]
pub struct N4K2Solution {
    pub values: AbcValues,
    pub solution: Solution,
}

pub fn solve_n4k2(instance: &GameInstance) -> Result<Solution> {
    solve_n4k2_detailed(instance).map(|s| s.solution)
}

pub fn solve_n4k2_detailed(instance: &GameInstance) -> Result<N4K2Solution> {
    if instance.n() != 4 || instance.k() != 2 || !instance.is_complete() {
        return Err(Error::Regime(
            "n4k2 requires n=4, k=2 on the complete hypergraph".into(),
        ));
    }
    let sorted = instance.sorted_rewards();
    let r: [Rational; 4] = sorted.try_into().expect("four rewards");
    let values = abc_values(&r)?;
    let order = instance.sorted_order();
    let searcher = searcher_strategy(&r, &values)?.relabel(order);
    let hider = hider_strategy(&r, &values)?.relabel(order);
    let solution = Solution::new(values.value().clone(), searcher, hider, Method::N4K2);
    Ok(N4K2Solution { values, solution })
}
