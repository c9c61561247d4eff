//! End-to-end numerical verification of the whole analysis.
//!
//! Each [`Check`] recomputes one claim from scratch with the public API and
//! records the measured quantities next to the verdict. The same checks back
//! the `verify` CLI subcommand and the `acceptance` test target.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bayes::{bayes_decision, moments, DiscretePrior, MINIMAX_M1, MINIMAX_M2};
use crate::classes::{classify, dominate_construction, shrinkage_bounds, DecisionClass};
use crate::lip::{
    conditional_mutual_information, minimax_affine_constant, printed_affine_constant,
    solve_lip_ascent, solve_lip_lp, solve_lip_parametric, support_reduction,
};
use crate::minimax::{
    equalizer_floor_with, solve_minimax_closed, solve_minimax_numeric, worst_case_symmetric,
};
use crate::model::{Decision, Probability};
use crate::par::{self, Exec};
use crate::risk::{risk, worst_case_risk, DEFAULT_GRID_N, DEFAULT_REFINE_TOL};
use crate::sampling;

/// Problem sizes for one verification run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sizes {
    pub numeric_grid: usize,
    pub numeric_refine: usize,
    pub equalizer_scan: usize,
    pub lp_grids: &'static [usize],
    pub ascent_grid: usize,
    pub ascent_restarts: usize,
    pub interval_samples: usize,
    pub domination_samples: usize,
    pub domination_grid: usize,
    pub moment_samples: usize,
    pub info_samples: usize,
    pub reduction_samples: usize,
    pub time_budget: Duration,
}

impl Sizes {
    pub const FULL: Sizes = Sizes {
        numeric_grid: 101,
        numeric_refine: 20,
        equalizer_scan: 1000,
        lp_grids: &[3, 5, 11, 101, 1001, 10_001],
        ascent_grid: 101,
        ascent_restarts: 20,
        interval_samples: 100_000,
        domination_samples: 1000,
        domination_grid: 10_001,
        moment_samples: 1000,
        info_samples: 1000,
        reduction_samples: 100,
        time_budget: Duration::from_secs(120),
    };

    pub const FAST: Sizes = Sizes {
        numeric_grid: 41,
        numeric_refine: 20,
        equalizer_scan: 200,
        lp_grids: &[3, 11, 101],
        ascent_grid: 21,
        ascent_restarts: 4,
        interval_samples: 10_000,
        domination_samples: 100,
        domination_grid: 1001,
        moment_samples: 200,
        info_samples: 200,
        reduction_samples: 20,
        time_budget: Duration::from_secs(10),
    };
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOptions {
    pub fast: bool,
    pub seed: u64,
    /// The rule under test as the minimax decision. Defaults to the closed form;
    /// overriding it is how the suite is mutation-tested.
    pub minimax_decision: Decision,
}

impl VerifyOptions {
    pub fn new(fast: bool) -> Self {
        VerifyOptions {
            fast,
            seed: 0,
            minimax_decision: solve_minimax_closed().decision,
        }
    }

    pub fn sizes(&self) -> Sizes {
        if self.fast {
            Sizes::FAST
        } else {
            Sizes::FULL
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(id: &str, name: &str, passed: bool, detail: String) -> Self {
        Check {
            id: id.to_string(),
            name: name.to_string(),
            passed,
            detail,
        }
    }

    /// `PASS C1 minimax rule: ...`
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {} {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub fast: bool,
    pub checks: Vec<Check>,
    pub elapsed_secs: f64,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn rng_for(seed: u64, tag: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(index as u64);
    rng
}

fn p(x: f64) -> Probability {
    Probability::new(x).expect("constant in [0, 1]")
}

/// Runs every check in order.
pub fn run(opts: &VerifyOptions) -> VerifyReport {
    run_with_progress(opts, |_| {})
}

/// Like [`run`], calling `on_check` as soon as each check finishes.
pub fn run_with_progress(opts: &VerifyOptions, mut on_check: impl FnMut(&Check)) -> VerifyReport {
    let start = Instant::now();
    let sizes = opts.sizes();
    let mut checks = Vec::new();
    let steps: [fn(&VerifyOptions, &Sizes) -> Check; 10] = [
        minimax_rule,
        minimax_value,
        equalizer_floor,
        prior_hierarchy,
        latent_information_prior,
        game_value,
        dominance,
        moment_characterization,
        information_identities,
        support_reduction_check,
    ];
    for step in steps {
        let c = step(opts, &sizes);
        on_check(&c);
        checks.push(c);
    }
    let elapsed = start.elapsed();
    let runtime = Check::new(
        "R",
        "runtime",
        elapsed < sizes.time_budget,
        format!(
            "{:.2} s (budget {} s)",
            elapsed.as_secs_f64(),
            sizes.time_budget.as_secs()
        ),
    );
    on_check(&runtime);
    checks.push(runtime);
    VerifyReport {
        fast: opts.fast,
        checks,
        elapsed_secs: elapsed.as_secs_f64(),
    }
}

/// C1: closed form is exactly (1/5, 4/5) and the numeric oracle agrees.
fn minimax_rule(opts: &VerifyOptions, s: &Sizes) -> Check {
    let d = opts.minimax_decision;
    let exact = d.d0() == 1.0 / 5.0 && d.d1() == 4.0 / 5.0;
    let t = Instant::now();
    let numeric = solve_minimax_numeric(s.numeric_grid, s.numeric_refine);
    let secs = t.elapsed().as_secs_f64();
    let gap = numeric.decision.max_abs_diff(&d);
    Check::new(
        "C1",
        "minimax rule",
        exact && gap <= 1e-3 && secs < 10.0,
        format!(
            "closed {d}, numeric {} (grid {}, {} rounds), max diff {gap:.2e} <= 1e-3, {secs:.2} s < 10 s",
            numeric.decision, s.numeric_grid, s.numeric_refine
        ),
    )
}

/// C2: the worst case of the rule is ln(5/4), attained at 0, 1/2 and 1.
fn minimax_value(opts: &VerifyOptions, _: &Sizes) -> Check {
    let d = opts.minimax_decision;
    let wc = worst_case_risk(&d, DEFAULT_GRID_N, DEFAULT_REFINE_TOL);
    let sup = wc.value.to_f64();
    let target = 1.25f64.ln();
    let at = [0.0, 0.5, 1.0].map(|t| sup - risk(&d, p(t)).to_f64());
    let ok = (sup - target).abs() <= 1e-9 && at.iter().all(|g| g.abs() <= 1e-9);
    Check::new(
        "C2",
        "minimax value",
        ok,
        format!(
            "sup R = {sup:.12} vs ln(5/4) = {target:.12}; sup - R at 0, 1/2, 1 = {:.1e}, {:.1e}, {:.1e}",
            at[0], at[1], at[2]
        ),
    )
}

/// C3: rules ignoring the observation cannot beat ln 2.
fn equalizer_floor(opts: &VerifyOptions, s: &Sizes) -> Check {
    let floor = equalizer_floor_with(Exec::default(), s.equalizer_scan, 1001);
    let value = worst_case_risk(&opts.minimax_decision, DEFAULT_GRID_N, DEFAULT_REFINE_TOL)
        .value
        .to_f64();
    let ok = (floor.scan_min - LN_2).abs() <= 1e-6
        && floor.scan_min >= LN_2 - 1e-12
        && floor.scan_min > value;
    Check::new(
        "C3",
        "equalizer floor",
        ok,
        format!(
            "inf over c of sup R(c, c) = {:.12} at c = {} (ln 2 = {LN_2:.12}), minimax value {value:.12}",
            floor.scan_min, floor.scan_argmin
        ),
    )
}

/// C4: minimax prior beats Jeffreys which beats uniform.
fn prior_hierarchy(_: &VerifyOptions, _: &Sizes) -> Check {
    let vals = [1.0 / 3.0, 0.5, 1.0].map(|a| worst_case_symmetric(a).expect("positive"));
    let closed = [1.25f64.ln(), (4.0f64 / 3.0).ln(), 1.5f64.ln()];
    let err = vals
        .iter()
        .zip(&closed)
        .map(|(v, c)| (v - c).abs())
        .fold(0.0, f64::max);
    let ok = vals[0] < vals[1] && vals[1] < vals[2] && err <= 1e-12;
    Check::new(
        "C4",
        "prior hierarchy",
        ok,
        format!(
            "a=1/3: {:.10}, a=1/2: {:.10}, a=1: {:.10}; max error vs closed forms {err:.1e}",
            vals[0], vals[1], vals[2]
        ),
    )
}

fn lip_weights(prior: &DiscretePrior) -> Option<[f64; 3]> {
    let a = prior.atoms();
    if a.len() == 3 && a[0].theta.get() == 0.0 && a[1].theta.get() == 0.5 && a[2].theta.get() == 1.0
    {
        Some([a[0].weight, a[1].weight, a[2].weight])
    } else {
        None
    }
}

/// C5: the three LIP solvers return {0: 0.3, 1/2: 0.4, 1: 0.3}.
fn latent_information_prior(opts: &VerifyOptions, s: &Sizes) -> Check {
    let target = [0.3, 0.4, 0.3];
    let mut lp_err: f64 = 0.0;
    let mut lp_ok = true;
    for &n in s.lp_grids {
        match solve_lip_lp(&par::unit_grid(n))
            .ok()
            .and_then(|sol| lip_weights(&sol.prior))
        {
            Some(w) => {
                lp_err = lp_err.max(
                    w.iter()
                        .zip(&target)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max),
                )
            }
            None => lp_ok = false,
        }
    }
    lp_ok &= lp_err <= 1e-6;

    let c = solve_lip_parametric(1e-8);
    let par_err = [c.x - 0.0, c.y - 0.5, c.alpha - 0.3, c.beta - 0.2]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));

    let lip = DiscretePrior::latent_information();
    let tv = match solve_lip_ascent(s.ascent_grid, s.ascent_restarts, opts.seed) {
        Ok(r) => r.prior.total_variation(&lip),
        Err(_) => f64::INFINITY,
    };

    Check::new(
        "C5",
        "latent information prior",
        lp_ok && par_err <= 1e-8 && tv <= 1e-3,
        format!(
            "LP grids {:?}: support {{0, 1/2, 1}} {}, weight error {lp_err:.1e} <= 1e-6; parametric (x, y, alpha, beta) = ({}, {}, {}, {}) error {par_err:.1e} <= 1e-8; ascent TV {tv:.1e} <= 1e-3 ({} restarts)",
            s.lp_grids,
            if lp_ok { "ok" } else { "NOT FOUND" },
            c.x,
            c.y,
            c.alpha,
            c.beta,
            s.ascent_restarts
        ),
    )
}

/// C6: max I equals the minimax value; the printed constants are off by 2 ln 2.
fn game_value(opts: &VerifyOptions, s: &Sizes) -> Check {
    let value = worst_case_risk(&opts.minimax_decision, DEFAULT_GRID_N, DEFAULT_REFINE_TOL)
        .value
        .to_f64();
    let (max_i, argmax_ok) = match solve_lip_ascent(s.ascent_grid, s.ascent_restarts, opts.seed) {
        Ok(r) => {
            let best = r
                .restarts
                .iter()
                .map(|o| o.value)
                .fold(f64::NEG_INFINITY, f64::max);
            (best, r.restarts.iter().all(|o| o.value <= value + 1e-9))
        }
        Err(_) => (f64::NAN, false),
    };
    let lp_exact = solve_lip_lp(&par::unit_grid(1001))
        .ok()
        .and_then(|sol| lip_weights(&sol.prior))
        .is_some_and(|w| {
            (w[0] - 0.3).abs() <= 1e-9 && (w[1] - 0.4).abs() <= 1e-9 && (w[2] - 0.3).abs() <= 1e-9
        });
    let offset = printed_affine_constant() - minimax_affine_constant();
    let ok = (max_i - value).abs() <= 1e-6
        && (max_i - 0.223_144).abs() <= 1e-6
        && (value - 0.223_144).abs() <= 1e-6
        && (offset - 2.0 * LN_2).abs() <= 1e-12
        && argmax_ok
        && lp_exact;
    Check::new(
        "C6",
        "game value",
        ok,
        format!(
            "max I = {max_i:.12}, minimax value = {value:.12}, |diff| {:.1e} <= 1e-6; printed constant - S(1/5) = {offset:.15} (2 ln 2 = {:.15}); argmax = {{0: 0.3, 1/2: 0.4, 1: 0.3}}: {}",
            (max_i - value).abs(),
            2.0 * LN_2,
            lp_exact
        ),
    )
}

/// C7: shrinkage intervals are nonempty and the constructed rule dominates.
fn dominance(opts: &VerifyOptions, s: &Sizes) -> Check {
    let chunk = 1000;
    let chunks = s.interval_samples.div_ceil(chunk);
    let interval_fail: usize = par::map_indexed(Exec::default(), chunks, |k| {
        let mut rng = rng_for(opts.seed, 7, k);
        let n = chunk.min(s.interval_samples - k * chunk);
        (0..n)
            .filter(|_| {
                let d = sampling::c_greater(&mut rng);
                !shrinkage_bounds(&d).is_ok_and(|b| b.is_nonempty())
            })
            .count()
    })
    .into_iter()
    .sum();

    let grid = par::unit_grid(s.domination_grid);
    let results = par::map_indexed(Exec::default(), s.domination_samples, |i| {
        let mut rng = rng_for(opts.seed, 71, i);
        let d = sampling::c_greater(&mut rng);
        let Ok(c) = dominate_construction(&d) else {
            return (false, f64::NEG_INFINITY, f64::NEG_INFINITY);
        };
        let min_gap = grid
            .iter()
            .map(|&t| risk(&d, p(t)).to_f64() - risk(&c.dominating, p(t)).to_f64())
            .fold(f64::INFINITY, f64::min);
        let ok = classify(&c.dominating) == DecisionClass::CLess
            && c.certificate.f > 0.0
            && c.certificate.margin() > 0.0
            && min_gap > 0.0;
        (ok, min_gap, c.certificate.margin())
    });
    let dom_fail = results.iter().filter(|r| !r.0).count();
    let min_gap = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let min_margin = results.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    Check::new(
        "C7",
        "dominance",
        interval_fail == 0 && dom_fail == 0,
        format!(
            "shrinkage interval empty in {interval_fail}/{} samples; dominating construction failed in {dom_fail}/{} (smallest grid gap {min_gap:.2e}, smallest F*H - G^2/4 {min_margin:.2e}, {} grid points)",
            s.interval_samples, s.domination_samples, s.domination_grid
        ),
    )
}

/// C8: moment condition iff the Bayes rule is the minimax rule.
fn moment_characterization(opts: &VerifyOptions, s: &Sizes) -> Check {
    let target = opts.minimax_decision;
    let sat = par::map_indexed(Exec::default(), s.moment_samples, |i| {
        let mut rng = rng_for(opts.seed, 8, i);
        let n = 3 + i % 6;
        let prior = sampling::minimax_prior(&mut rng, n);
        bayes_decision(&prior).map_or(f64::INFINITY, |d| d.max_abs_diff(&target))
    });
    let viol = par::map_indexed(Exec::default(), s.moment_samples, |i| {
        let mut rng = rng_for(opts.seed, 81, i);
        let prior = sampling::moment_violating_prior(&mut rng, 1e-3);
        bayes_decision(&prior).map_or(f64::INFINITY, |d| d.max_abs_diff(&target))
    });
    let worst_sat = sat.iter().copied().fold(0.0, f64::max);
    let closest_viol = viol.iter().copied().fold(f64::INFINITY, f64::min);
    Check::new(
        "C8",
        "moment characterization",
        worst_sat <= 1e-9 && closest_viol >= 1e-4,
        format!(
            "{} moment-satisfying priors: max distance to {target} = {worst_sat:.1e} <= 1e-9; {} violating priors: min distance = {closest_viol:.1e} >= 1e-4",
            s.moment_samples, s.moment_samples
        ),
    )
}

/// C9: both routes to I agree, I <= ln 2, and a point mass carries no information.
fn information_identities(opts: &VerifyOptions, s: &Sizes) -> Check {
    let rows = par::map_indexed(Exec::default(), s.info_samples, |i| {
        let mut rng = rng_for(opts.seed, 9, i);
        let n = 1 + i % 8;
        let prior = sampling::prior(&mut rng, n);
        match conditional_mutual_information(&prior) {
            Ok(r) => (
                (r.predictive_entropy - r.entropy_term - r.bayes_risk_form).abs(),
                r.value,
            ),
            Err(_) => (f64::INFINITY, f64::INFINITY),
        }
    });
    let max_disagree = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_info = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let point = [0.0, 0.3, 0.5, 0.9]
        .iter()
        .filter(|&&t| t > 0.0)
        .map(|&t| {
            conditional_mutual_information(&DiscretePrior::point_mass(p(t)))
                .map_or(f64::INFINITY, |r| r.value.abs())
        })
        .fold(0.0, f64::max);
    Check::new(
        "C9",
        "information identities",
        max_disagree <= 1e-12 && max_info <= LN_2 + 1e-12 && point <= 1e-15,
        format!(
            "{} random priors: max |entropy form - Bayes-risk form| = {max_disagree:.1e} <= 1e-12, max I = {max_info:.6} <= ln 2; I(point mass) = {point:.1e}",
            s.info_samples
        ),
    )
}

/// C10: support reduction ends with at most three atoms, same moments, no loss of I.
fn support_reduction_check(opts: &VerifyOptions, s: &Sizes) -> Check {
    let rows = par::map_indexed(Exec::default(), s.reduction_samples, |i| {
        let mut rng = rng_for(opts.seed, 10, i);
        let prior = sampling::minimax_prior(&mut rng, 5);
        match support_reduction(&prior) {
            Ok(out) => {
                let m = moments(&out.prior);
                let drift = (m.m1 - MINIMAX_M1).abs().max((m.m2 - MINIMAX_M2).abs());
                (out.prior.len(), drift, out.info_after - out.info_before)
            }
            Err(_) => (usize::MAX, f64::INFINITY, f64::NEG_INFINITY),
        }
    });
    let max_atoms = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let max_drift = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let min_gain = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    Check::new(
        "C10",
        "support reduction",
        max_atoms <= 3 && max_drift <= 1e-9 && min_gain >= -1e-12,
        format!(
            "{} random 5-atom minimax priors: max atoms after = {max_atoms}, max moment drift = {max_drift:.1e}, min I gain = {min_gain:.2e}",
            s.reduction_samples
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_run_passes() {
        let report = run(&VerifyOptions::new(true));
        for c in &report.checks {
            assert!(c.passed, "{}", c.line());
        }
        assert_eq!(report.checks.len(), 11);
    }

    #[test]
    fn perturbed_minimax_rule_fails() {
        let mut opts = VerifyOptions::new(true);
        opts.minimax_decision = Decision::new(0.21, 0.8).unwrap();
        let report = run(&opts);
        assert!(!report.all_passed());
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id.as_str())
            .collect();
        assert!(
            failed.contains(&"C1") && failed.contains(&"C2") && failed.contains(&"C8"),
            "{failed:?}"
        );
    }
}
