//! Partition of the decision square, the shrinkage inequality for the
//! `δ1 < δ0` region, and the construction of a dominating decision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Decision, ExtReal, Probability};
use crate::par::{self, Exec};
use crate::risk::{risk, risk_difference_coeffs, QuadraticRiskDiff};

/// Minimum finite improvement that counts as strictly better in [`dominates`].
pub const STRICT_GAP: f64 = 1e-12;

/// The disjoint classes of the square `[0, 1]²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecisionClass {
    /// `0 < δ0 < δ1 < 1`: Bayes rules of priors with nondegenerate marginals.
    CLess,
    /// `0 < δ0 = δ1 < 1`: rules that ignore the observation.
    CEq,
    /// `0 < δ1 < δ0 < 1`: inadmissible, dominated by a member of `CLess`.
    CGreater,
    /// The maximum-likelihood rule `(0, 1)`.
    BoundaryMle,
    /// Every other boundary point; dominated by the maximum-likelihood rule.
    BoundaryOther,
}

impl DecisionClass {
    pub fn is_boundary(self) -> bool {
        matches!(
            self,
            DecisionClass::BoundaryMle | DecisionClass::BoundaryOther
        )
    }

    /// Member of the minimal complete class `CLess ∪ CEq ∪ {MLE}`.
    pub fn is_admissible(self) -> bool {
        !matches!(self, DecisionClass::CGreater | DecisionClass::BoundaryOther)
    }
}

/// Classifies with exact comparisons on the stored values. Callers that need
/// a tolerance around the diagonal or the boundary must round first.
pub fn classify(delta: &Decision) -> DecisionClass {
    let (d0, d1) = (delta.d0(), delta.d1());
    if !delta.is_interior() {
        if d0 == 0.0 && d1 == 1.0 {
            DecisionClass::BoundaryMle
        } else {
            DecisionClass::BoundaryOther
        }
    } else if d0 < d1 {
        DecisionClass::CLess
    } else if d0 == d1 {
        DecisionClass::CEq
    } else {
        DecisionClass::CGreater
    }
}

/// Both sides of the inequality bracketing `μ²`:
/// `upper_prod > μ² > lower_sq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuBounds {
    pub lower_sq: f64,
    pub upper_prod: f64,
}

impl MuBounds {
    pub fn is_nonempty(&self) -> bool {
        self.upper_prod > self.lower_sq
    }

    /// Midpoint of the admissible interval for `μ²`.
    pub fn mu(&self) -> f64 {
        (0.5 * (self.lower_sq + self.upper_prod)).sqrt()
    }
}

fn require_c_greater(delta: &Decision) -> Result<()> {
    match classify(delta) {
        DecisionClass::CGreater => Ok(()),
        other => Err(Error::domain(format!(
            "decision {delta} is in class {other:?}, expected 0 < delta1 < delta0 < 1"
        ))),
    }
}

/// Bounds on `μ²` for a decision with `0 < δ1 < δ0 < 1`.
///
/// With `s = δ0 + 1 - δ1`:
/// `lower_sq = (ln s)²` and
/// `upper_prod = ln[(1-δ1) / (s(1-δ0))] · ln[δ0 / (s δ1)]`.
pub fn shrinkage_bounds(delta: &Decision) -> Result<MuBounds> {
    require_c_greater(delta)?;
    let (d0, d1) = (delta.d0(), delta.d1());
    let ln_s = (d0 - d1).ln_1p();
    let left = (-d1).ln_1p() - ln_s - (-d0).ln_1p();
    let right = d0.ln() - ln_s - d1.ln();
    Ok(MuBounds {
        lower_sq: ln_s * ln_s,
        upper_prod: left * right,
    })
}

/// A dominating decision for `δ` in `CGreater`, together with its certificate.
#[derive(Debug, Clone, Serialize)]
pub struct Domination {
    pub bounds: MuBounds,
    pub mu: f64,
    pub dominating: Decision,
    pub certificate: QuadraticRiskDiff,
}

/// Shrinks `δ` toward the corner `(0, 1)`:
/// `δ0' = e^{-μ} δ0`, `δ1' = e^{-μ} δ1 + 1 - e^{-μ}`, with `μ² ` at the
/// midpoint of the shrinkage interval.
pub fn dominating_decision(delta: &Decision) -> Result<Decision> {
    Ok(dominate_construction(delta)?.dominating)
}

/// [`dominating_decision`] with the `μ` bounds and the `(F, G, H)` certificate.
pub fn dominate_construction(delta: &Decision) -> Result<Domination> {
    let bounds = shrinkage_bounds(delta)?;
    let mu = bounds.mu();
    let shrink = (-mu).exp();
    let dominating = Decision {
        delta0: Probability::saturating(shrink * delta.d0()),
        delta1: Probability::saturating(shrink * delta.d1() - (-mu).exp_m1()),
    };
    let certificate = risk_difference_coeffs(delta, &dominating)?;
    Ok(Domination {
        bounds,
        mu,
        dominating,
        certificate,
    })
}

/// [`dominates_with`] using the default execution mode.
pub fn dominates(delta_prime: &Decision, delta: &Decision, grid_n: usize) -> bool {
    dominates_with(Exec::default(), delta_prime, delta, grid_n)
}

/// Grid check that `δ'` is no worse than `δ` everywhere and strictly better
/// somewhere.
///
/// "No worse" is `R_δ'(θ) <= R_δ(θ) + STRICT_GAP` on the extended reals, so
/// `+∞ <= +∞` holds. "Strictly better" needs a grid point where `R_δ'` is
/// finite and either `R_δ` is infinite or the gap exceeds [`STRICT_GAP`].
/// When both decisions are interior the exact minimum of the quadratic risk
/// difference over `[0, 1]` must also be nonnegative.
pub fn dominates_with(exec: Exec, delta_prime: &Decision, delta: &Decision, grid_n: usize) -> bool {
    assert!(grid_n >= 2);
    let grid = par::unit_grid(grid_n);
    let pairs = par::map_slice(exec, &grid, |&t| {
        let t = Probability::saturating(t);
        (risk(delta_prime, t), risk(delta, t))
    });

    let mut strict = false;
    for &(better, worse) in &pairs {
        match (better, worse) {
            (ExtReal::PosInf, ExtReal::Finite(_)) => return false,
            (ExtReal::PosInf, ExtReal::PosInf) => {}
            (ExtReal::Finite(_), ExtReal::PosInf) => strict = true,
            (ExtReal::Finite(b), ExtReal::Finite(w)) => {
                if b > w + STRICT_GAP {
                    return false;
                }
                if w - b > STRICT_GAP {
                    strict = true;
                }
            }
        }
    }
    if !strict {
        return false;
    }
    match risk_difference_coeffs(delta, delta_prime) {
        Ok(q) => q.min_on_unit_interval() >= -STRICT_GAP,
        Err(_) => true,
    }
}
