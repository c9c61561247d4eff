//! Frequentist risk `R_δ(θ)`, its supremum over `θ`, and the quadratic form of
//! the risk difference between two interior decisions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{binary_entropy, Decision, ExtReal, Probability};
use crate::par::{self, Exec};

/// Default number of grid points used by [`worst_case_risk`] callers.
pub const DEFAULT_GRID_N: usize = 10_001;
/// Default bisection tolerance on the stationarity condition.
pub const DEFAULT_REFINE_TOL: f64 = 1e-12;
/// Local maxima within this distance of the supremum are reported as attained.
pub const ATTAINED_TOL: f64 = 1e-9;

/// `ln(1/q)` on the extended reals.
fn neg_ln(q: f64) -> ExtReal {
    if q == 0.0 {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(-q.ln())
    }
}

/// Expected KL loss of `delta` when the observation and the future outcome
/// are both drawn from `Bernoulli(theta)`:
///
/// ```text
/// R(θ) = -S(θ) + θ² ln(1/δ1) + θ(1-θ) ln(1/(1-δ1)) + θ(1-θ) ln(1/δ0) + (1-θ)² ln(1/(1-δ0))
/// ```
pub fn risk(delta: &Decision, theta: Probability) -> ExtReal {
    let t = theta.get();
    let u = 1.0 - t;
    let (d0, d1) = (delta.d0(), delta.d1());
    let cross = neg_ln(d0) + neg_ln(1.0 - d1);
    let loss = neg_ln(d1).scale(t * t) + cross.scale(t * u) + neg_ln(1.0 - d0).scale(u * u);
    loss + (-binary_entropy(theta))
}

/// Polynomial part of the risk of an interior decision,
/// `R(θ) = -S(θ) + quad θ² + lin θ + constant`.
#[derive(Debug, Clone, Copy)]
struct RiskPolynomial {
    quad: f64,
    lin: f64,
}

impl RiskPolynomial {
    fn new(delta: &Decision) -> Self {
        let a = -delta.d1().ln();
        let b = -(-delta.d1()).ln_1p() - delta.d0().ln();
        let c = -(-delta.d0()).ln_1p();
        RiskPolynomial {
            quad: a - b + c,
            lin: b - 2.0 * c,
        }
    }

    /// `R'(θ) = ln(θ / (1 - θ)) + 2 quad θ + lin` for `θ` in `(0, 1)`.
    fn slope(&self, t: f64) -> f64 {
        (t / (1.0 - t)).ln() + 2.0 * self.quad * t + self.lin
    }

    /// Bisects `R'` on a bracket where it goes from positive to negative.
    fn refine_max(&self, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let s = self.slope(mid);
            if s > 0.0 {
                lo = mid;
            } else if s < 0.0 {
                hi = mid;
            } else {
                return mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Supremum of `R_δ(θ)` over `θ ∈ [0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub value: ExtReal,
    /// A maximizing `θ`.
    pub argmax: Probability,
    /// Every local maximum found within [`ATTAINED_TOL`] of the supremum.
    pub attained_at: Vec<Probability>,
}

/// [`worst_case_risk_with`] using the default execution mode.
pub fn worst_case_risk(delta: &Decision, grid_n: usize, refine_tol: f64) -> WorstCase {
    worst_case_risk_with(Exec::default(), delta, grid_n, refine_tol)
}

/// Evaluates the risk on a uniform grid of `grid_n` points (endpoints
/// included), then refines every interior local maximum by bisection on
/// `R'(θ) = 0` down to `refine_tol`.
///
/// Returns `+∞` as soon as any grid point has infinite risk, which happens for
/// every decision on the boundary of the square.
///
/// # Panics
///
/// If `grid_n < 3`.
pub fn worst_case_risk_with(
    exec: Exec,
    delta: &Decision,
    grid_n: usize,
    refine_tol: f64,
) -> WorstCase {
    assert!(
        grid_n >= 3,
        "worst_case_risk needs grid_n >= 3, got {grid_n}"
    );
    let grid = par::unit_grid(grid_n);
    let values = par::map_slice(exec, &grid, |&t| risk(delta, Probability::saturating(t)));

    if values.iter().any(|v| v.is_infinite()) {
        let attained_at: Vec<Probability> = grid
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_infinite())
            .map(|(&t, _)| Probability::saturating(t))
            .collect();
        return WorstCase {
            value: ExtReal::PosInf,
            argmax: attained_at[0],
            attained_at,
        };
    }
    let values: Vec<f64> = values.iter().map(|v| v.to_f64()).collect();

    let poly = RiskPolynomial::new(delta);
    // R'(0) = -inf and R'(1) = +inf, so both endpoints are local maxima.
    let slopes: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| match i {
            0 => f64::NEG_INFINITY,
            _ if i == grid_n - 1 => f64::INFINITY,
            _ => poly.slope(t),
        })
        .collect();

    let mut local_max = vec![(0.0, values[0]), (1.0, values[grid_n - 1])];
    for i in 0..grid_n - 1 {
        let (s, s_next) = (slopes[i], slopes[i + 1]);
        if s > 0.0 && s_next < 0.0 {
            let t = poly.refine_max(grid[i], grid[i + 1], refine_tol);
            let v = risk(delta, Probability::saturating(t)).to_f64();
            local_max.push((t, v));
        } else if s == 0.0 && i > 0 && slopes[i - 1] > 0.0 && s_next < 0.0 {
            local_max.push((grid[i], values[i]));
        }
    }

    let grid_best = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
            if v > best.1 {
                (i, v)
            } else {
                best
            }
        });
    let (mut arg, mut sup) = (grid[grid_best.0], grid_best.1);
    for &(t, v) in &local_max {
        if v > sup {
            sup = v;
            arg = t;
        }
    }

    local_max.sort_by(|a, b| a.0.total_cmp(&b.0));
    let attained_at = local_max
        .iter()
        .filter(|(_, v)| *v >= sup - ATTAINED_TOL)
        .map(|&(t, _)| Probability::saturating(t))
        .collect();

    WorstCase {
        value: ExtReal::Finite(sup),
        argmax: Probability::saturating(arg),
        attained_at,
    }
}

/// Coefficients of `ΔR(θ) = R_δ(θ) - R_δ'(θ) = F θ² - G θ + H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticRiskDiff {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl QuadraticRiskDiff {
    pub fn eval(&self, theta: f64) -> f64 {
        (self.f * theta - self.g) * theta + self.h
    }

    /// `F·H - G²/4`; together with `F > 0` this certifies `ΔR > 0` on all of ℝ.
    pub fn margin(&self) -> f64 {
        self.f * self.h - 0.25 * self.g * self.g
    }

    /// True when `F > 0` and `F·H - G²/4 > 0`.
    pub fn certifies_positive(&self) -> bool {
        self.f > 0.0 && self.margin() > 0.0
    }

    /// Exact minimum of the quadratic over `θ ∈ [0, 1]`.
    pub fn min_on_unit_interval(&self) -> f64 {
        let mut m = self.eval(0.0).min(self.eval(1.0));
        if self.f > 0.0 {
            let vertex = self.g / (2.0 * self.f);
            if (0.0..=1.0).contains(&vertex) {
                m = m.min(self.eval(vertex));
            }
        }
        m
    }
}

/// Quadratic coefficients of `R_δ - R_δ'` for two interior decisions.
pub fn risk_difference_coeffs(
    delta: &Decision,
    delta_prime: &Decision,
) -> Result<QuadraticRiskDiff> {
    if !delta.is_interior() || !delta_prime.is_interior() {
        return Err(Error::domain(
            "risk-difference coefficients need all components strictly inside (0, 1)",
        ));
    }
    let ln = f64::ln;
    let ln_c = |x: f64| (-x).ln_1p();
    let (d0, d1) = (delta.d0(), delta.d1());
    let (e0, e1) = (delta_prime.d0(), delta_prime.d1());

    let f = (ln(e1) - ln(d1)) + (ln_c(d1) - ln_c(e1)) + (ln(d0) - ln(e0)) + (ln_c(e0) - ln_c(d0));
    let g = 2.0 * (ln_c(e0) - ln_c(d0)) + (ln_c(d1) - ln_c(e1)) + (ln(d0) - ln(e0));
    let h = ln_c(e0) - ln_c(d0);
    Ok(QuadraticRiskDiff { f, g, h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::kl_bernoulli;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const LN_5_4: f64 = 0.223_143_551_314_209_76;

    fn p(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    fn dec(a: f64, b: f64) -> Decision {
        Decision::new(a, b).unwrap()
    }

    /// Loss averaged over the observation: (1-θ)·KL(θ, δ0) + θ·KL(θ, δ1).
    fn risk_kl_form(delta: &Decision, theta: f64) -> ExtReal {
        kl_bernoulli(p(theta), delta.delta0).scale(1.0 - theta)
            + kl_bernoulli(p(theta), delta.delta1).scale(theta)
    }

    #[test]
    fn risk_examples() {
        assert_abs_diff_eq!(risk(&dec(0.5, 0.5), p(0.5)).to_f64(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            risk(&dec(0.2, 0.8), p(0.5)).to_f64(),
            LN_5_4,
            epsilon = 1e-15
        );
        assert!(risk(&Decision::MLE, p(0.3)).is_infinite());
        assert_eq!(risk(&Decision::MLE, p(0.0)), ExtReal::ZERO);
        assert_eq!(risk(&Decision::MLE, p(1.0)), ExtReal::ZERO);
    }

    #[test]
    fn boundary_forms_agree() {
        for &(a, b) in &[(0.0, 0.5), (0.3, 1.0), (1.0, 1.0), (0.0, 0.0), (0.0, 1.0)] {
            for &t in &[0.0, 0.25, 1.0] {
                assert_eq!(
                    risk(&dec(a, b), p(t)).is_infinite(),
                    risk_kl_form(&dec(a, b), t).is_infinite()
                );
            }
        }
    }

    #[test]
    fn minimax_equalizes_at_three_points() {
        let d = Decision::MINIMAX;
        let r0 = risk(&d, p(0.0)).to_f64();
        let rh = risk(&d, p(0.5)).to_f64();
        let r1 = risk(&d, p(1.0)).to_f64();
        assert!((r0 - rh).abs() <= 1e-12);
        assert!((r1 - rh).abs() <= 1e-12);
    }

    #[test]
    fn worst_case_examples() {
        let wc = worst_case_risk(&dec(0.5, 0.5), DEFAULT_GRID_N, DEFAULT_REFINE_TOL);
        assert_abs_diff_eq!(wc.value.to_f64(), std::f64::consts::LN_2, epsilon = 1e-12);
        let at: Vec<f64> = wc.attained_at.iter().map(|t| t.get()).collect();
        assert_eq!(at, vec![0.0, 1.0]);

        let wc = worst_case_risk(&Decision::MINIMAX, DEFAULT_GRID_N, DEFAULT_REFINE_TOL);
        assert_abs_diff_eq!(wc.value.to_f64(), LN_5_4, epsilon = 1e-12);
        let at: Vec<f64> = wc.attained_at.iter().map(|t| t.get()).collect();
        assert_eq!(at.len(), 3, "{at:?}");
        assert_eq!(at[0], 0.0);
        assert_abs_diff_eq!(at[1], 0.5, epsilon = 1e-9);
        assert_eq!(at[2], 1.0);

        let wc = worst_case_risk(&Decision::MLE, 11, DEFAULT_REFINE_TOL);
        assert!(wc.value.is_infinite());
    }

    #[test]
    fn worst_case_finds_off_grid_interior_max() {
        // Symmetric rule with a = 1/12: interior maximum at θ = 1/2, which a
        // grid of even size does not contain.
        let a = 1.0 / 12.0;
        let d = dec(a / (2.0 * a + 1.0), (a + 1.0) / (2.0 * a + 1.0));
        let wc = worst_case_risk(&d, 100, DEFAULT_REFINE_TOL);
        let expected = 0.5 * (13.0f64 / 4.0).ln() + (14.0f64 / 13.0).ln();
        assert_abs_diff_eq!(wc.value.to_f64(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(wc.argmax.get(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn refinement_is_monotone() {
        let mut rng_state = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..200 {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            let a = (rng_state >> 11) as f64 / (1u64 << 53) as f64;
            let b = ((rng_state.rotate_left(29)) >> 11) as f64 / (1u64 << 53) as f64;
            let d = dec(a.clamp(1e-3, 0.999), b.clamp(1e-3, 0.999));
            let coarse = worst_case_risk(&d, 1001, DEFAULT_REFINE_TOL).value.to_f64();
            let fine = worst_case_risk(&d, 10_001, DEFAULT_REFINE_TOL)
                .value
                .to_f64();
            assert!(
                fine <= coarse + DEFAULT_REFINE_TOL,
                "{d}: {fine} vs {coarse}"
            );
        }
    }

    #[test]
    fn coeffs_examples() {
        let d = dec(0.3, 0.6);
        assert_eq!(
            risk_difference_coeffs(&d, &d).unwrap(),
            QuadraticRiskDiff {
                f: 0.0,
                g: 0.0,
                h: 0.0
            }
        );
        let q = risk_difference_coeffs(&dec(0.7, 0.2), &dec(0.39552, 0.54797)).unwrap();
        assert!(q.f > 0.0);
        assert!(q.margin() > 0.0);
        assert!(risk_difference_coeffs(&Decision::MLE, &d).is_err());
        assert!(risk_difference_coeffs(&d, &dec(0.0, 0.5)).is_err());
    }

    #[test]
    fn quadratic_minimum() {
        let q = QuadraticRiskDiff {
            f: 1.0,
            g: 1.0,
            h: 0.5,
        };
        assert_abs_diff_eq!(q.min_on_unit_interval(), 0.25, epsilon = 1e-15);
        let q = QuadraticRiskDiff {
            f: -1.0,
            g: 0.0,
            h: 0.5,
        };
        assert_abs_diff_eq!(q.min_on_unit_interval(), -0.5, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn risk_forms_agree(a in 1e-4f64..0.9999, b in 1e-4f64..0.9999, t in 0.0f64..=1.0) {
            let d = dec(a, b);
            let lhs = risk(&d, p(t)).to_f64();
            let rhs = risk_kl_form(&d, t).to_f64();
            prop_assert!((lhs - rhs).abs() <= 1e-12, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn quadratic_reproduces_difference(
            a in 1e-3f64..0.999, b in 1e-3f64..0.999,
            c in 1e-3f64..0.999, e in 1e-3f64..0.999,
        ) {
            let (d, dp) = (dec(a, b), dec(c, e));
            let q = risk_difference_coeffs(&d, &dp).unwrap();
            for i in 0..=100 {
                let t = i as f64 / 100.0;
                let diff = risk(&d, p(t)).to_f64() - risk(&dp, p(t)).to_f64();
                prop_assert!((q.eval(t) - diff).abs() <= 1e-12, "t={} {} vs {}", t, q.eval(t), diff);
            }
        }
    }
}
