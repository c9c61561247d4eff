use serde::Serialize;

use crate::bayes::{bayes_decision, DiscretePrior};
use crate::error::Result;
use crate::model::{binary_entropy, BinaryOutcome, Probability};
use crate::risk::risk;

/// `I(Θ; Y | X)` for a discrete prior, computed two ways.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InfoReport {
    /// `predictive_entropy - entropy_term`, in nats.
    pub value: f64,
    /// `∫ S(θ) π(dθ)`.
    pub entropy_term: f64,
    /// `Σ_x p(x) S(δ(x))` for the Bayes rule `δ`.
    pub predictive_entropy: f64,
    /// `Σ_θ π(θ) R_δ(θ)`, the Bayes risk of the Bayes rule.
    pub bayes_risk_form: f64,
}

/// Conditional mutual information between `θ` and the future outcome given
/// the observation:
///
/// ```text
/// I = Σ_θ π(θ) Σ_x p_θ(x) D(p_θ || p_π(· | x)) = H(Y | X) - H(Y | X, Θ)
/// ```
///
/// Fails when the prior puts all its mass at `0` or at `1`, since the Bayes
/// predictive is then undefined for one of the observations.
pub fn conditional_mutual_information(prior: &DiscretePrior) -> Result<InfoReport> {
    let delta = bayes_decision(prior)?;
    let entropy_term = prior.expect(|t| binary_entropy(Probability::saturating(t)));

    let predictive_entropy: f64 = BinaryOutcome::BOTH
        .iter()
        .map(|&x| {
            let px = prior.expect(|t| x.likelihood(Probability::saturating(t)));
            px * binary_entropy(delta.estimate(x))
        })
        .sum();

    // The Bayes rule is finite wherever the prior has mass.
    let bayes_risk_form = prior
        .atoms()
        .iter()
        .map(|a| a.weight * risk(&delta, a.theta).to_f64())
        .sum();

    Ok(InfoReport {
        value: (predictive_entropy - entropy_term).max(0.0),
        entropy_term,
        predictive_entropy,
        bayes_risk_form,
    })
}
