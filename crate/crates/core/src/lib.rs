//! Decision-theoretic analysis of one-step-ahead Bernoulli prediction under
//! Kullback-Leibler loss.
//!
//! A predictive rule is a pair `(δ0, δ1)` of probability estimates, one for
//! each value of the single observation. This crate computes the risk of such
//! rules, sorts them into dominance classes, finds the minimax rule
//! `(1/5, 4/5)`, characterizes the priors whose Bayes rule is minimax, and
//! computes the latent information prior `{0: 0.3, 1/2: 0.4, 1: 0.3}` with
//! three independent solvers.
//!
//! All logarithms are natural; information and risk values are in nats.

pub mod bayes;
pub mod classes;
pub mod error;
pub mod lip;
pub mod minimax;
pub mod model;
pub mod optim;
pub mod par;
pub mod risk;
pub mod sampling;
pub mod verify;

pub use bayes::{BetaHyper, DiscretePrior, MomentSummary};
pub use classes::{DecisionClass, MuBounds};
pub use error::{Error, Result};
pub use model::{binary_entropy, kl_bernoulli, BinaryOutcome, Decision, ExtReal, Probability};
pub use risk::{risk, worst_case_risk, QuadraticRiskDiff, WorstCase};
