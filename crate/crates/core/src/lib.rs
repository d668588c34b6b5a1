//! Solvers for the stochastic bilevel continuous knapsack problem.
//!
//! A leader chooses a knapsack capacity `b` within `[b_lo, b_hi]` and pays
//! `delta` per unit of capacity.  A follower then fills the knapsack greedily
//! by profit density, using item profits `c` that are random from the
//! leader's point of view; the leader collects `d_i` per fully packed unit of
//! item `i`.  Every solver in this crate computes the leader's expected
//! objective as an explicit piecewise linear function of `b` and maximizes it
//! over the allowed capacity interval.
//!
//! Module map:
//! * [`model`]: instance data, validation, piecewise linear/polynomial types.
//! * [`certain`]: the deterministic follower problem and leader objective.
//! * [`finite_support`]: exact expectation over finitely supported profits,
//!   plus sample average approximation.
//! * [`dp_core`]: shared machinery for the pseudo-polynomial dynamic programs.
//! * [`dp_finite`]: exact DP for independent finitely supported profits.
//! * [`dp_uniform`]: DP for independent uniformly distributed profits.
//! * [`approx`]: additive-error approximation for arbitrary independent
//!   profit distributions available through CDF/quantile oracles.
//! * [`oracles`]: slow, independent reference implementations used to
//!   validate the fast paths.
//! * [`harness`]: counting-reduction instances that stress the solvers and
//!   double as correctness checks with known closed-form answers.

pub mod approx;
pub mod certain;
pub mod dp_core;
pub mod dp_finite;
pub mod dp_uniform;
pub mod error;
pub mod finite_support;
pub mod harness;
pub mod model;
pub mod oracles;
pub mod rational;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{Instance, ItemDistribution, Method, SolveResult};
pub use rational::Rat;
