//! Symmetric four-atom parametrization of minimax priors.
//!
//! Atoms `x, y, 1-y, 1-x` with `0 <= x <= y <= 1/2` carry weights
//! `α, β, β, α` with `2α + 2β = 1`. Symmetry gives `E θ = 1/2`; writing
//! `g(t) = t(1-t)`, the second-moment condition becomes
//! `α g(x) + β g(y) = 1/20`, which fixes `β` given `(x, y)`:
//!
//! ```text
//! β = (1/20 - g(x)/2) / (g(y) - g(x))
//! ```
//!
//! Feasibility needs `g(x) <= 1/10 <= g(y)`.

use serde::Serialize;

use crate::bayes::DiscretePrior;
use crate::error::Result;
use crate::model::{binary_entropy, Probability};
use crate::optim::minimize_scalar;

const SCAN_N: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParametricLipCandidate {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub beta: f64,
}

fn g(t: f64) -> f64 {
    t * (1.0 - t)
}

fn entropy(t: f64) -> f64 {
    binary_entropy(Probability::saturating(t))
}

/// Largest `t <= 1/2` with `t(1-t) <= 1/10`.
fn x_max() -> f64 {
    0.5 * (1.0 - 0.6f64.sqrt())
}

impl ParametricLipCandidate {
    /// The candidate for atoms `(x, y)` with `β` fixed by the moment condition.
    pub fn from_atoms(x: f64, y: f64) -> Self {
        let gap = g(y) - g(x);
        let num = 0.05 - 0.5 * g(x);
        let beta = if gap > 1e-15 {
            (num / gap).clamp(0.0, 0.5)
        } else {
            0.0
        };
        ParametricLipCandidate {
            x,
            y,
            alpha: 0.5 - beta,
            beta,
        }
    }

    /// `∫ S dπ = 2 S(x) α + 2 S(y) β`.
    pub fn objective(&self) -> f64 {
        2.0 * entropy(self.x) * self.alpha + 2.0 * entropy(self.y) * self.beta
    }

    /// The prior, merging coincident atoms and dropping zero weights.
    pub fn to_prior(&self) -> Result<DiscretePrior> {
        let atoms = [
            (self.x, self.alpha),
            (self.y, self.beta),
            (1.0 - self.y, self.beta),
            (1.0 - self.x, self.alpha),
        ];
        DiscretePrior::new(atoms.into_iter().filter(|a| a.1 > 0.0))
    }
}

/// Minimizes `∫ S dπ` over the four-atom family by nested scalar searches:
/// the outer one over `x ∈ [0, x_max]`, the inner one over
/// `y ∈ [max(x, x_max), 1/2]`.
pub fn solve_lip_parametric(tol: f64) -> ParametricLipCandidate {
    let search_tol = (tol * 1e-3).max(1e-14);
    let xm = x_max();
    let inner = |x: f64| {
        let best = minimize_scalar(
            |y| ParametricLipCandidate::from_atoms(x, y).objective(),
            x.max(xm),
            0.5,
            SCAN_N,
            search_tol,
        );
        best.x
    };
    let outer = minimize_scalar(
        |x| ParametricLipCandidate::from_atoms(x, inner(x)).objective(),
        0.0,
        xm,
        SCAN_N,
        search_tol,
    );
    ParametricLipCandidate::from_atoms(outer.x, inner(outer.x))
}
