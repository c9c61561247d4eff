//! Worst-case risk minimization.
//!
//! Symmetric Bayes rules `Beta(a, a)` have the closed-form worst case
//!
//! ```text
//! sup_θ R(θ) = ln((2a+1)/(a+1))                          a >= 1/3
//!            = ½ ln((a+1)/(4a)) + ln((2a+1)/(a+1))        0 < a <= 1/3
//! ```
//!
//! minimized at `a = 1/3`, i.e. the rule `(1/5, 4/5)` with value `ln(5/4)`.
//! The numeric solver below searches the decision square directly and does
//! not use the beta parametrization, so it serves as an independent check.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Decision, Probability};
use crate::par::{self, Exec};
use crate::risk::{worst_case_risk_with, DEFAULT_GRID_N, DEFAULT_REFINE_TOL};

/// `θ` grid used inside the numeric search; local maxima are refined by
/// bisection so the grid only has to bracket them.
const SEARCH_THETA_GRID: usize = 201;
/// Half-width of the local lattice, in lattice steps.
const LATTICE_HALF: usize = 4;
/// The refinement box never shrinks below this half-width.
const MIN_BOX: f64 = 1e-9;

/// Minimax value `ln(5/4)`.
pub fn minimax_value() -> f64 {
    1.25f64.ln()
}

/// Worst-case risk of the Bayes rule for the symmetric prior `Beta(a, a)`.
pub fn worst_case_symmetric(a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!(
            "symmetric hyperparameter must be positive, got {a}"
        )));
    }
    let base = ((2.0 * a + 1.0) / (a + 1.0)).ln();
    if a >= 1.0 / 3.0 {
        Ok(base)
    } else {
        Ok(0.5 * ((a + 1.0) / (4.0 * a)).ln() + base)
    }
}

/// Infimum over the observation-ignoring rules `δ0 = δ1 = c` of the worst-case
/// risk, with a numeric scan over `c`.
#[derive(Debug, Clone, Serialize)]
pub struct EqualizerFloor {
    /// Closed form `ln 2`.
    pub value: f64,
    pub minimizer_c: f64,
    /// Smallest worst-case risk found by the scan.
    pub scan_min: f64,
    pub scan_argmin: f64,
}

/// Worst case of the constant rule `(c, c)`: `max(ln(1/c), ln(1/(1-c)))`.
pub fn equalizer_sup(c: f64) -> f64 {
    (-c.ln()).max(-(-c).ln_1p())
}

pub fn equalizer_floor() -> EqualizerFloor {
    equalizer_floor_with(Exec::default(), 1001, 1001)
}

/// Scans `c = i/scan_n`, `i = 1..scan_n-1`, computing each worst case with the
/// general risk engine on a `grid_n`-point `θ` grid.
pub fn equalizer_floor_with(exec: Exec, scan_n: usize, grid_n: usize) -> EqualizerFloor {
    assert!(scan_n >= 2);
    let cs: Vec<f64> = (1..scan_n).map(|i| i as f64 / scan_n as f64).collect();
    let sups = par::map_slice(exec, &cs, |&c| {
        let d = Decision::new(c, c).expect("c in (0, 1)");
        worst_case_risk_with(Exec::Sequential, &d, grid_n, DEFAULT_REFINE_TOL)
            .value
            .to_f64()
    });
    let (i, &scan_min) = sups
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty scan");
    EqualizerFloor {
        value: LN_2,
        minimizer_c: 0.5,
        scan_min,
        scan_argmin: cs[i],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimaxReport {
    pub decision: Decision,
    pub value: f64,
    pub method: Method,
    pub worst_theta: Vec<Probability>,
}

impl MinimaxReport {
    fn for_decision(decision: Decision, method: Method) -> Self {
        let wc = worst_case_risk_with(
            Exec::default(),
            &decision,
            DEFAULT_GRID_N,
            DEFAULT_REFINE_TOL,
        );
        MinimaxReport {
            decision,
            value: wc.value.to_f64(),
            method,
            worst_theta: wc.attained_at,
        }
    }
}

/// The rule `(1/5, 4/5)` with value `ln(5/4)` attained at `θ ∈ {0, 1/2, 1}`.
pub fn solve_minimax_closed() -> MinimaxReport {
    MinimaxReport {
        decision: Decision::MINIMAX,
        value: minimax_value(),
        method: Method::ClosedForm,
        worst_theta: vec![Probability::ZERO, Probability::HALF, Probability::ONE],
    }
}

fn search_objective(d0: f64, d1: f64) -> f64 {
    let d = Decision::new(d0, d1).expect("search stays inside the square");
    worst_case_risk_with(Exec::Sequential, &d, SEARCH_THETA_GRID, DEFAULT_REFINE_TOL)
        .value
        .to_f64()
}

fn in_search_region(d0: f64, d1: f64) -> bool {
    d0 > 0.0 && d1 < 1.0 && d0 <= d1
}

/// Index of the smallest value, first index on ties.
fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (i, &v)| if v < best.1 { (i, v) } else { best },
        )
        .0
}

pub fn solve_minimax_numeric(grid_n: usize, refine_iters: usize) -> MinimaxReport {
    solve_minimax_numeric_with(Exec::default(), grid_n, refine_iters)
}

/// Minimizes the worst-case risk over `0 < δ0 <= δ1 < 1` by a coarse grid with
/// spacing `1/(grid_n - 1)` followed by `refine_iters` rounds of local lattice
/// search, halving the search box each round.
///
/// # Panics
///
/// If `grid_n < 11`.
pub fn solve_minimax_numeric_with(exec: Exec, grid_n: usize, refine_iters: usize) -> MinimaxReport {
    assert!(
        grid_n >= 11,
        "numeric minimax needs grid_n >= 11, got {grid_n}"
    );
    let h = 1.0 / (grid_n - 1) as f64;
    let points: Vec<(f64, f64)> = (1..grid_n - 1)
        .flat_map(|i| (i..grid_n - 1).map(move |j| (i as f64 * h, j as f64 * h)))
        .collect();
    let values = par::map_slice(exec, &points, |&(a, b)| search_objective(a, b));
    let start = points[argmin(&values)];
    let (d0, d1) = refine_with(exec, start, h, refine_iters);
    MinimaxReport::for_decision(
        Decision::new(d0, d1).expect("inside square"),
        Method::Numeric,
    )
}

/// Local lattice refinement from `start` with initial box half-width
/// `half_width`; the box halves every round down to a floor of `1e-9`.
pub fn refine_minimax(start: Decision, half_width: f64, refine_iters: usize) -> MinimaxReport {
    let (d0, d1) = refine_with(
        Exec::default(),
        (start.d0(), start.d1()),
        half_width,
        refine_iters,
    );
    MinimaxReport::for_decision(
        Decision::new(d0, d1).expect("inside square"),
        Method::Numeric,
    )
}

fn refine_with(exec: Exec, start: (f64, f64), half_width: f64, refine_iters: usize) -> (f64, f64) {
    let mut best = start;
    let mut best_val = if in_search_region(start.0, start.1) {
        search_objective(start.0, start.1)
    } else {
        f64::INFINITY
    };
    let mut w = half_width;
    let side = 2 * LATTICE_HALF + 1;
    for _ in 0..refine_iters {
        let step = w / LATTICE_HALF as f64;
        let centre = best;
        let candidates: Vec<(f64, f64)> = (0..side * side)
            .map(|k| {
                let di = (k / side) as f64 - LATTICE_HALF as f64;
                let dj = (k % side) as f64 - LATTICE_HALF as f64;
                (centre.0 + di * step, centre.1 + dj * step)
            })
            .filter(|&(a, b)| in_search_region(a, b))
            .collect();
        let values = par::map_slice(exec, &candidates, |&(a, b)| search_objective(a, b));
        if !candidates.is_empty() {
            let i = argmin(&values);
            if values[i] < best_val {
                best_val = values[i];
                best = candidates[i];
            }
        }
        w = (0.5 * w).max(MIN_BOX);
    }
    best
}

/// Numeric search restricted to the symmetric rules `(c, 1 - c)`, `0 < c <= 1/2`.
pub fn solve_minimax_symmetric_numeric(grid_n: usize, refine_iters: usize) -> MinimaxReport {
    assert!(grid_n >= 11);
    let h = 0.5 / (grid_n - 1) as f64;
    let cs: Vec<f64> = (1..grid_n).map(|i| i as f64 * h).collect();
    let values = par::map_slice(Exec::default(), &cs, |&c| search_objective(c, 1.0 - c));
    let mut best = cs[argmin(&values)];
    let mut best_val = search_objective(best, 1.0 - best);
    let mut w = h;
    for _ in 0..refine_iters {
        let step = w / LATTICE_HALF as f64;
        let centre = best;
        for k in 0..=2 * LATTICE_HALF {
            let c = centre + (k as f64 - LATTICE_HALF as f64) * step;
            if c > 0.0 && c <= 0.5 {
                let v = search_objective(c, 1.0 - c);
                if v < best_val {
                    best_val = v;
                    best = c;
                }
            }
        }
        w = (0.5 * w).max(MIN_BOX);
    }
    MinimaxReport::for_decision(
        Decision::new(best, 1.0 - best).expect("inside square"),
        Method::Numeric,
    )
}
