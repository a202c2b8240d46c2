//! Solvers for the zero-sum booby-trap search game.
//!
//! A Searcher opens one hyperedge of boxes and collects the rewards inside
//! unless the Hider has trapped one of them. This crate computes the game
//! value and optimal mixed strategies:
//!
//! * [`one_uniform`]: closed form when every hyperedge is a singleton.
//! * [`equal`]: complete hypergraph with identical rewards, plus limits.
//! * [`k1`]: complete hypergraph with a single trap (number partitioning).
//! * [`n4k2`]: complete hypergraph with four boxes and two traps.
//! * [`oracle`]: exact rational simplex on the enumerated payoff matrix.
//!
//! [`bounds`] has general value bounds and the partition-form strategy
//! checker, [`monte_carlo`] replays strategies with a seeded generator, and
//! [`cli`] / [`io`] back the `trapsearch` binary and its JSON files.
//!
//! Every solver returns exact rationals, and [`Solution::certify`] checks a
//! result by sweeping all pure deviations of both players.

pub mod bounds;
pub mod boxset;
pub mod cli;
pub mod equal;
mod error;
pub mod game;
pub mod io;
pub mod k1;
pub mod monte_carlo;
pub mod n4k2;
pub mod one_uniform;
pub mod oracle;
pub mod partition;
pub mod rational;
mod simplex;

pub use boxset::BoxSet;
pub use error::{Error, Result};
pub use game::{
    expected_payoff, guarantee_of_hider, guarantee_of_searcher, payoff, Certificates,
    GameInstance, HiderStrategy, Hypergraph, Method, SearcherStrategy, Solution,
};
pub use oracle::{solve_any, solve_with};
pub use rational::Rational;
