//! Exact pivoting solver for two-player zero-sum matrix games.
//!
//! The row player maximizes. Payoffs are shifted to be strictly positive and
//! the game is solved as `max Σ w` subject to `A w <= 1`, `w >= 0` on a
//! compact tableau. Bland's rule keeps degenerate pivots from cycling.
//! Denominators are cleared up front and the tableau is pivoted fraction-free,
//! so all intermediate arithmetic is on integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug)]
pub(crate) struct MatrixGameSolution {
    pub value: Rational,
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    /// Column player's variable.
    Col(usize),
    /// Row player's variable (slack of a row constraint).
    Row(usize),
}

impl Label {
    fn rank(self, cols: usize) -> usize {
        match self {
            Label::Col(j) => j,
            Label::Row(i) => cols + i,
        }
    }
}

/// Solves `max_p min_q pᵀ A q`. `matrix` must be nonempty and rectangular.
pub(crate) fn solve_matrix_game(matrix: &[Vec<Rational>]) -> MatrixGameSolution {
    let m = matrix.len();
    let n = matrix.first().map_or(0, Vec::len);
    assert!(m > 0 && n > 0, "payoff matrix must be nonempty");
    assert!(matrix.iter().all(|row| row.len() == n), "payoff matrix must be rectangular");

    if matrix.iter().flatten().all(Zero::is_zero) {
        return MatrixGameSolution {
            value: Rational::zero(),
            row_strategy: vec![Rational::new(1.into(), (m as i64).into()); m],
            col_strategy: vec![Rational::new(1.into(), (n as i64).into()); n],
        };
    }

    // Clear denominators, then raise the lowest entry to 1.
    let scale = matrix
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let scaled: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|a| (a * &scale).to_integer()).collect())
        .collect();
    let shift = BigInt::one() - scaled.iter().flatten().min().expect("nonempty");

    // Integer tableau: the true entries are `t / det`. Rows 0..m are
    // constraints with right-hand side in column n; row m is the objective.
    let mut t: Vec<Vec<BigInt>> = scaled
        .into_iter()
        .map(|row| {
            let mut r: Vec<BigInt> = row.into_iter().map(|a| a + &shift).collect();
            r.push(BigInt::one());
            r
        })
        .collect();
    let mut bottom = vec![-BigInt::one(); n];
    bottom.push(BigInt::zero());
    t.push(bottom);
    let mut det = BigInt::one();

    let mut row_labels: Vec<Label> = (0..m).map(Label::Row).collect();
    let mut col_labels: Vec<Label> = (0..n).map(Label::Col).collect();

    loop {
        let entering = (0..n)
            .filter(|&j| t[m][j].is_negative())
            .min_by_key(|&j| col_labels[j].rank(n));
        let Some(c) = entering else { break };

        // Minimum ratio t[i][n] / t[i][c] over positive t[i][c]; the common
        // denominator cancels, so compare by cross-multiplication.
        let mut leaving: Option<usize> = None;
        for i in 0..m {
            if !t[i][c].is_positive() {
                continue;
            }
            let better = match leaving {
                None => true,
                Some(b) => {
                    let lhs = &t[i][n] * &t[b][c];
                    let rhs = &t[b][n] * &t[i][c];
                    lhs < rhs || (lhs == rhs && row_labels[i].rank(n) < row_labels[b].rank(n))
                }
            };
            if better {
                leaving = Some(i);
            }
        }
        let r = leaving.expect("strictly positive payoffs keep the program bounded");
        det = pivot(&mut t, r, c, &det);
        std::mem::swap(&mut row_labels[r], &mut col_labels[c]);
    }

    // The optimal objective is t[m][n] / det and equals 1 / (value + shift).
    let corner = t[m][n].clone();
    let value = (Rational::new(det, corner.clone()) - Rational::from_integer(shift)) / Rational::from_integer(scale);
    let mut row_strategy = vec![Rational::zero(); m];
    let mut col_strategy = vec![Rational::zero(); n];
    for (j, label) in col_labels.iter().enumerate() {
        if let Label::Row(i) = *label {
            row_strategy[i] = Rational::new(t[m][j].clone(), corner.clone());
        }
    }
    for (i, label) in row_labels.iter().enumerate() {
        if let Label::Col(j) = *label {
            col_strategy[j] = Rational::new(t[i][n].clone(), corner.clone());
        }
    }
    MatrixGameSolution {
        value,
        row_strategy,
        col_strategy,
    }
}

/// Fraction-free exchange on `(r, c)`; returns the new common denominator.
/// Every updated entry is a minor of the starting tableau, so the division
/// by the old denominator is exact.
fn pivot(t: &mut [Vec<BigInt>], r: usize, c: usize, det: &BigInt) -> BigInt {
    let p = t[r][c].clone();
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let factor = row[c].clone();
        for (j, a) in row.iter_mut().enumerate() {
            if j == c {
                continue;
            }
            let mut v = &*a * &p;
            if !factor.is_zero() && !pivot_row[j].is_zero() {
                v -= &factor * &pivot_row[j];
            }
            *a = v / det;
        }
        row[c] = -factor;
    }
    t[r][c] = det.clone();
    p
}
