//! Support reduction for minimax priors.
//!
//! A weight perturbation `d` with `Σ d_j = Σ d_j θ_j = Σ d_j θ_j² = 0` keeps a
//! prior minimax, and `I(π - t d) = I(π) + t Σ d_j S(θ_j)`. Orienting `d` so
//! that `Σ d_j S(θ_j) >= 0` and stepping until a weight reaches zero removes an
//! atom without lowering `I`. Repeating leaves at most three atoms.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::info::conditional_mutual_information;
use crate::bayes::{is_minimax_prior, DiscretePrior, DEFAULT_MOMENT_TOL};
use crate::error::{Error, Result};
use crate::model::{binary_entropy, Probability};

/// One elimination step: `w <- w - step · coefficients`.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionDirection {
    /// One coefficient per atom of the prior before the step.
    pub coefficients: Vec<f64>,
    pub step: f64,
    /// `Σ coefficients · S(atoms)`, the gain in `I` per unit step.
    pub entropy_slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionOutcome {
    pub prior: DiscretePrior,
    pub steps: Vec<ReductionDirection>,
    pub info_before: f64,
    pub info_after: f64,
}

/// Null vector of the `(1, θ, θ²)` moment map supported on four atoms,
/// scaled to unit max-norm.
fn moment_null_vector(t: [f64; 4]) -> [f64; 4] {
    let v = Matrix3::new(
        1.0,
        1.0,
        1.0, //
        t[0],
        t[1],
        t[2], //
        t[0] * t[0],
        t[1] * t[1],
        t[2] * t[2],
    );
    let rhs = -Vector3::new(1.0, t[3], t[3] * t[3]);
    let x = v
        .lu()
        .solve(&rhs)
        .expect("distinct atoms give a nonsingular Vandermonde matrix");
    let d = [x[0], x[1], x[2], 1.0];
    let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    d.map(|v| v / scale)
}

/// Reduces a minimax prior to at most three atoms without decreasing `I`.
///
/// Priors with three or fewer atoms are returned unchanged. Fails with a
/// domain error if the prior violates the moment condition by more than
/// `1e-9`.
pub fn support_reduction(prior: &DiscretePrior) -> Result<ReductionOutcome> {
    if !is_minimax_prior(prior, DEFAULT_MOMENT_TOL) {
        return Err(Error::domain(
            "support reduction needs a prior satisfying the minimax moment condition",
        ));
    }
    let info_before = conditional_mutual_information(prior)?.value;
    let mut thetas: Vec<f64> = prior.thetas().collect();
    let mut weights: Vec<f64> = prior.weights().collect();
    let mut steps = Vec::new();

    while thetas.len() > 3 {
        let sub = [thetas[0], thetas[1], thetas[2], thetas[3]];
        let mut d4 = moment_null_vector(sub);
        let slope: f64 = d4
            .iter()
            .zip(sub)
            .map(|(d, t)| d * binary_entropy(Probability::saturating(t)))
            .sum();
        if slope < 0.0 {
            d4 = d4.map(|v| -v);
        }

        let (mut step, mut hit) = (f64::INFINITY, 0);
        for j in 0..4 {
            if d4[j] > 0.0 && weights[j] / d4[j] < step {
                step = weights[j] / d4[j];
                hit = j;
            }
        }
        let mut coefficients = vec![0.0; thetas.len()];
        coefficients[..4].copy_from_slice(&d4);
        for j in 0..4 {
            weights[j] -= step * d4[j];
        }
        weights[hit] = 0.0;
        steps.push(ReductionDirection {
            coefficients,
            step,
            entropy_slope: slope.abs(),
        });

        let keep: Vec<bool> = weights.iter().map(|&w| w > 0.0).collect();
        let mut k = 0;
        thetas.retain(|_| {
            k += 1;
            keep[k - 1]
        });
        weights.retain(|&w| w > 0.0);
    }

    let reduced = DiscretePrior::normalized(thetas.into_iter().zip(weights))?;
    let info_after = conditional_mutual_information(&reduced)?.value;
    Ok(ReductionOutcome {
        prior: reduced,
        steps,
        info_before,
        info_after,
    })
}
