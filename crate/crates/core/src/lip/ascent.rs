//! Unconstrained maximization of `I(π)` over weights on a uniform grid.
//!
//! The partial derivative of `I` with respect to the weight at `θ_i` is the
//! Bayes risk `R_δ(θ_i)` of the current Bayes rule `δ`, so the update
//!
//! ```text
//! w_i <- w_i exp(η R_δ(θ_i)) / Z
//! ```
//!
//! is exponentiated-gradient ascent on the simplex. The step `η` starts at 0.5,
//! halves whenever a step would decrease `I` and doubles after every accepted
//! step. Near the optimum the gradient gaps between neighbouring grid points
//! are tiny, and a fixed step leaves visible mass next to the support.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::info::{conditional_mutual_information, InfoReport};
use super::PRUNE_THRESHOLD;
use crate::bayes::DiscretePrior;
use crate::error::Result;
use crate::model::{binary_entropy, Probability};
use crate::par::{self, Exec};

const INITIAL_STEP: f64 = 0.5;
const STEP_GROWTH: f64 = 2.0;
const MAX_STEP: f64 = 1e6;
const TINY: f64 = 1e-200;
/// Stop once `max_i R_δ(θ_i) - I(w)`, an upper bound on the distance to the
/// optimum, falls below this.
const GAP_TOL: f64 = 1e-10;
const MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RestartOutcome {
    pub restart: usize,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AscentReport {
    pub prior: DiscretePrior,
    pub info: InfoReport,
    pub restarts: Vec<RestartOutcome>,
}

/// Risk polynomial of the Bayes rule for the current weights, evaluated on
/// the grid. Returns `(I, R_δ(θ_i))`.
struct Objective<'a> {
    thetas: &'a [f64],
    entropies: Vec<f64>,
}

impl<'a> Objective<'a> {
    fn new(thetas: &'a [f64]) -> Self {
        let entropies = thetas
            .iter()
            .map(|&t| binary_entropy(Probability::saturating(t)))
            .collect();
        Objective { thetas, entropies }
    }

    fn eval(&self, w: &[f64], grad: &mut [f64]) -> f64 {
        let (mut p1, mut s11, mut s01) = (0.0, 0.0, 0.0);
        for (&t, &wi) in self.thetas.iter().zip(w) {
            p1 += wi * t;
            s11 += wi * t * t;
            s01 += wi * t * (1.0 - t);
        }
        let p0 = 1.0 - p1;
        let d1 = s11 / p1;
        let d0 = s01 / p0;
        let a = -d1.ln();
        let b = -(-d1).ln_1p() - d0.ln();
        let c = -(-d0).ln_1p();
        let mut value = 0.0;
        for (i, &t) in self.thetas.iter().enumerate() {
            let u = 1.0 - t;
            let r = t * t * a + t * u * b + u * u * c - self.entropies[i];
            grad[i] = r;
            value += w[i] * r;
        }
        value
    }
}

fn ascend(thetas: &[f64], mut w: Vec<f64>) -> (Vec<f64>, usize) {
    let obj = Objective::new(thetas);
    let n = thetas.len();
    let mut grad = vec![0.0; n];
    let mut trial_grad = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut value = obj.eval(&w, &mut grad);
    let mut step = INITIAL_STEP;
    let mut iters = 0;
    while iters < MAX_ITERS {
        iters += 1;
        let top = grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for i in 0..n {
            trial[i] = w[i] * (step * (grad[i] - top)).exp();
            z += trial[i];
        }
        for v in trial.iter_mut() {
            *v /= z;
            // Keep vanishing weights out of the subnormal range.
            if *v < TINY {
                *v = 0.0;
            }
        }
        let next = obj.eval(&trial, &mut trial_grad);
        if next < value {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
            continue;
        }
        step = (step * STEP_GROWTH).min(MAX_STEP);
        std::mem::swap(&mut w, &mut trial);
        std::mem::swap(&mut grad, &mut trial_grad);
        value = next;
        let top = grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top - value < GAP_TOL {
            break;
        }
    }
    (w, iters)
}

pub fn solve_lip_ascent(grid_n: usize, restarts: usize, seed: u64) -> Result<AscentReport> {
    solve_lip_ascent_with(Exec::default(), grid_n, restarts, seed)
}

/// Runs `restarts` ascents from random starting weights on the uniform grid
/// of `grid_n` points and keeps the best (ties go to the lower restart
/// index). Restart `k` draws its start from ChaCha stream `k` of `seed`.
///
/// # Panics
///
/// If `grid_n < 3` or `restarts == 0`.
pub fn solve_lip_ascent_with(
    exec: Exec,
    grid_n: usize,
    restarts: usize,
    seed: u64,
) -> Result<AscentReport> {
    assert!(grid_n >= 3 && restarts >= 1);
    let thetas = par::unit_grid(grid_n);
    let runs = par::map_indexed(exec, restarts, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let start: Vec<f64> = (0..grid_n).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = start.iter().sum();
        let start = start.into_iter().map(|v| v / total).collect();
        ascend(&thetas, start)
    });

    let mut outcomes = Vec::with_capacity(restarts);
    let mut best: Option<(f64, usize, DiscretePrior, InfoReport)> = None;
    for (k, (w, iterations)) in runs.into_iter().enumerate() {
        let prior = DiscretePrior::pruned(&thetas, &w, PRUNE_THRESHOLD)?;
        let info = conditional_mutual_information(&prior)?;
        outcomes.push(RestartOutcome {
            restart: k,
            value: info.value,
            iterations,
        });
        if best.as_ref().is_none_or(|b| info.value > b.0) {
            best = Some((info.value, k, prior, info));
        }
    }
    let (_, _, prior, info) = best.expect("at least one restart");
    Ok(AscentReport {
        prior,
        info,
        restarts: outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let thetas = par::unit_grid(11);
        let obj = Objective::new(&thetas);
        let w: Vec<f64> = (0..11)
            .map(|i| (1.0 + i as f64 * 0.37).sin().abs() + 0.1)
            .collect();
        let total: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|v| v / total).collect();
        let mut grad = vec![0.0; 11];
        obj.eval(&w, &mut grad);
        // Directional derivative along e_i - e_j stays on the simplex.
        let mut scratch = vec![0.0; 11];
        let h = 1e-6;
        for (i, j) in [(0, 5), (3, 10), (2, 7)] {
            let mut up = w.clone();
            up[i] += h;
            up[j] -= h;
            let mut dn = w.clone();
            dn[i] -= h;
            dn[j] += h;
            let fd = (obj.eval(&up, &mut scratch) - obj.eval(&dn, &mut scratch)) / (2.0 * h);
            assert!(
                (fd - (grad[i] - grad[j])).abs() < 1e-7,
                "{fd} vs {}",
                grad[i] - grad[j]
            );
        }
    }

    #[test]
    fn objective_matches_info_report() {
        let thetas = par::unit_grid(5);
        let w = [0.1, 0.2, 0.3, 0.15, 0.25];
        let mut grad = vec![0.0; 5];
        let v = Objective::new(&thetas).eval(&w, &mut grad);
        let p = DiscretePrior::new(thetas.iter().copied().zip(w.iter().copied())).unwrap();
        let info = conditional_mutual_information(&p).unwrap();
        assert!((v - info.value).abs() < 1e-14);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = solve_lip_ascent(21, 3, 7).unwrap();
        let b = solve_lip_ascent_with(Exec::Sequential, 21, 3, 7).unwrap();
        assert_eq!(a.prior, b.prior);
        assert_eq!(a.info.value.to_bits(), b.info.value.to_bits());
    }

    #[test]
    fn converges_to_lip() {
        let r = solve_lip_ascent(101, 20, 42).unwrap();
        let tv = r
            .prior
            .total_variation(&DiscretePrior::latent_information());
        assert!(tv <= 1e-3, "tv = {tv}, prior = {:?}", r.prior);
        assert!(
            (r.info.value - 1.25f64.ln()).abs() <= 1e-6,
            "{}",
            r.info.value
        );
        for o in &r.restarts {
            assert!(o.value <= 1.25f64.ln() + 1e-9);
        }
    }
}
