//! Latent information prior as a linear program.
//!
//! Among minimax priors `I(π) = S(1/5) - ∫ S dπ`, so maximizing `I` is
//! minimizing `Σ S(θ_i) w_i` over grid weights subject to
//! `Σ w_i = 1`, `Σ θ_i w_i = 1/2`, `Σ θ_i² w_i = 2/5`, `w >= 0`.

use serde::Serialize;

use super::info::{conditional_mutual_information, InfoReport};
use super::simplex;
use super::PRUNE_THRESHOLD;
use crate::bayes::{DiscretePrior, MINIMAX_M1, MINIMAX_M2};
use crate::error::{Error, Result};
use crate::model::{binary_entropy, Probability};

#[derive(Debug, Clone, Serialize)]
pub struct LpLipSolution {
    pub prior: DiscretePrior,
    /// Minimized `∫ S dπ`.
    pub objective: f64,
    pub info: InfoReport,
    /// Another vertex attains the same objective; the first optimal basis
    /// found is returned. Happens e.g. for grids without the atom `1/2`.
    pub alternative_optima: bool,
    pub pivots: usize,
}

/// Solves the moment-constrained LP over `grid`.
///
/// The optimal vertex has at most three atoms. Fails with
/// [`Error::Infeasible`] if no weights on the grid satisfy the moment
/// condition.
pub fn solve_lip_lp(grid: &[f64]) -> Result<LpLipSolution> {
    if grid.len() < 3 {
        return Err(Error::domain(format!(
            "LP grid needs at least 3 points, got {}",
            grid.len()
        )));
    }
    let thetas: Vec<Probability> = grid
        .iter()
        .map(|&t| Probability::new(t))
        .collect::<Result<_>>()?;
    let cost: Vec<f64> = thetas.iter().map(|&t| binary_entropy(t)).collect();
    let rows = vec![
        vec![1.0; grid.len()],
        grid.to_vec(),
        grid.iter().map(|t| t * t).collect(),
    ];
    let sol = simplex::solve(&cost, &rows, &[1.0, MINIMAX_M1, MINIMAX_M2])?;
    let prior = DiscretePrior::pruned(grid, &sol.x, PRUNE_THRESHOLD)?;
    let info = conditional_mutual_information(&prior)?;
    Ok(LpLipSolution {
        objective: prior.expect(|t| binary_entropy(Probability::saturating(t))),
        prior,
        info,
        alternative_optima: sol.alternative_optima,
        pivots: sol.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::{is_minimax_prior, DEFAULT_MOMENT_TOL};
    use crate::par::unit_grid;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn assert_is_lip(p: &DiscretePrior, eps: f64) {
        let atoms: Vec<(f64, f64)> = p
            .atoms()
            .iter()
            .map(|a| (a.theta.get(), a.weight))
            .collect();
        assert_eq!(atoms.len(), 3, "{atoms:?}");
        for (got, want) in atoms.iter().zip([(0.0, 0.3), (0.5, 0.4), (1.0, 0.3)]) {
            assert_eq!(got.0, want.0);
            assert_abs_diff_eq!(got.1, want.1, epsilon = eps);
        }
    }

    #[test]
    fn five_point_grid() {
        let s = solve_lip_lp(&[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        assert_is_lip(&s.prior, 1e-12);
        assert!(!s.alternative_optima);
    }

    #[test]
    fn three_point_grid_is_unique_feasible_point() {
        let s = solve_lip_lp(&[0.0, 0.5, 1.0]).unwrap();
        assert_is_lip(&s.prior, 1e-12);
        assert_abs_diff_eq!(s.objective, 0.4 * LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(s.info.value, 1.25f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn fine_grids_keep_three_point_support() {
        for n in [11, 101, 1001] {
            let s = solve_lip_lp(&unit_grid(n)).unwrap();
            assert_is_lip(&s.prior, 1e-9);
            assert!(is_minimax_prior(&s.prior, DEFAULT_MOMENT_TOL));
        }
    }

    #[test]
    fn grid_without_half_has_tied_symmetric_optima() {
        let s = solve_lip_lp(&unit_grid(100)).unwrap();
        assert!(s.prior.len() <= 3);
        assert!(is_minimax_prior(&s.prior, DEFAULT_MOMENT_TOL));
    }

    #[test]
    fn infeasible_grid() {
        assert_eq!(
            solve_lip_lp(&[0.4, 0.5, 0.6]).unwrap_err(),
            Error::Infeasible
        );
        assert!(solve_lip_lp(&[0.0, 1.0]).is_err());
        assert!(solve_lip_lp(&[0.0, 0.5, 1.2]).is_err());
    }
}
