use bernoulli_minimax::bayes::{
    bayes_decision, beta_to_decision, decision_to_beta, moments, symmetrize, BetaHyper,
    DiscretePrior,
};
use bernoulli_minimax::classes::{classify, dominates, DecisionClass};
use bernoulli_minimax::lip::{solve_lip_ascent, solve_lip_lp, solve_lip_parametric};
use bernoulli_minimax::minimax::{minimax_value, refine_minimax};
use bernoulli_minimax::par::unit_grid;
use bernoulli_minimax::risk::{worst_case_risk, DEFAULT_REFINE_TOL};
use bernoulli_minimax::{sampling, Decision};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, ContinuousCDF};

#[test]
fn mle_dominates_sampled_boundary_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let d = sampling::boundary_other(&mut rng);
        assert_eq!(classify(&d), DecisionClass::BoundaryOther);
        assert!(
            dominates(&Decision::MLE, &d, 1001),
            "MLE should dominate {d}"
        );
    }
}

#[test]
fn interior_classes_follow_the_order_of_the_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let d = sampling::interior(&mut rng);
        let expected = if d.d0() < d.d1() {
            DecisionClass::CLess
        } else if d.d0() == d.d1() {
            DecisionClass::CEq
        } else {
            DecisionClass::CGreater
        };
        assert_eq!(classify(&d), expected);
    }
}

#[test]
fn symmetrization_never_raises_worst_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let d = sampling::interior(&mut rng);
        let before = worst_case_risk(&d, 2001, DEFAULT_REFINE_TOL).value.to_f64();
        let after = worst_case_risk(&symmetrize(&d), 2001, DEFAULT_REFINE_TOL)
            .value
            .to_f64();
        assert!(after <= before + 1e-12, "{d}: {after} > {before}");
    }
}

#[test]
fn beta_rules_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let a = rng.random_range(0.01..20.0);
        let b = rng.random_range(0.01..20.0);
        let back = decision_to_beta(&beta_to_decision(BetaHyper::new(a, b).unwrap())).unwrap();
        assert!((back.a - a).abs() <= 1e-9 * a.max(1.0));
        assert!((back.b - b).abs() <= 1e-9 * b.max(1.0));
    }
    assert!(
        beta_to_decision(BetaHyper::symmetric(1.0 / 3.0).unwrap()).max_abs_diff(&Decision::MINIMAX)
            <= 1e-15
    );
}

#[test]
fn discretized_beta_third_gives_minimax_rule() {
    let n = 10_000;
    let dist = Beta::new(1.0 / 3.0, 1.0 / 3.0).unwrap();
    let cells = (0..n).map(|i| {
        let (lo, hi) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
        let mid = 0.5 * (lo + hi);
        (mid, dist.cdf(hi) - dist.cdf(lo))
    });
    let prior = DiscretePrior::normalized(cells).unwrap();
    let d = bayes_decision(&prior).unwrap();
    assert!(d.max_abs_diff(&Decision::MINIMAX) <= 1e-3, "{d}");
    assert!(moments(&prior).minimax_violation() <= 1e-3);
}

#[test]
fn random_starts_all_reach_the_same_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let d0 = rng.random_range(0.0..0.5);
        let d1 = rng.random_range(0.5..1.0);
        let start = Decision::new(d0, d1).unwrap();
        let out = refine_minimax(start, 0.25, 60);
        assert!(
            out.decision.max_abs_diff(&Decision::MINIMAX) <= 1e-6,
            "start {start} ended at {}",
            out.decision
        );
        assert!((out.value - minimax_value()).abs() <= 1e-9);
    }
}

#[test]
fn lip_solvers_agree() {
    let lp = solve_lip_lp(&unit_grid(201)).unwrap().prior;
    let parametric = solve_lip_parametric(1e-10).to_prior().unwrap();
    let ascent = solve_lip_ascent(51, 6, 3).unwrap().prior;
    assert!(lp.total_variation(&parametric) <= 1e-8);
    assert!(lp.total_variation(&ascent) <= 1e-3);
}

#[test]
fn lp_solution_is_stable_under_grid_refinement() {
    let reference = solve_lip_lp(&unit_grid(11)).unwrap().prior;
    for n in [21, 41, 81, 161, 321] {
        let p = solve_lip_lp(&unit_grid(n)).unwrap().prior;
        assert!(p.total_variation(&reference) <= 1e-9, "grid {n}");
    }
}
