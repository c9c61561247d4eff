//! Priors and their Bayes predictive rules.
//!
//! Under KL loss the Bayes rule predicts with the posterior mean of `θ`, so a
//! prior only enters through its first two moments `E θ` and `E θ²`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Decision, Probability};

/// Atoms closer than this are merged into one.
pub const ATOM_MERGE_TOL: f64 = 1e-12;
/// Allowed deviation of the total weight from one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Default tolerance for [`is_minimax_prior`].
pub const DEFAULT_MOMENT_TOL: f64 = 1e-9;

/// First moment of every minimax prior.
pub const MINIMAX_M1: f64 = 0.5;
/// Second moment of every minimax prior.
pub const MINIMAX_M2: f64 = 0.4;

/// Hyperparameters of a `Beta(a, b)` prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaHyper {
    pub a: f64,
    pub b: f64,
}

impl BetaHyper {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::domain(format!(
                "beta hyperparameters must be positive and finite, got ({a}, {b})"
            )));
        }
        Ok(BetaHyper { a, b })
    }

    pub fn symmetric(a: f64) -> Result<Self> {
        BetaHyper::new(a, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub theta: Probability,
    pub weight: f64,
}

/// A prior with finitely many atoms, sorted and distinct, with positive weights
/// that sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "Vec<PriorRecord>")]
pub struct DiscretePrior {
    atoms: Vec<Atom>,
}

/// One entry of the prior file format: `{"atom": θ, "weight": w}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorRecord {
    pub atom: f64,
    pub weight: f64,
}

impl From<DiscretePrior> for Vec<PriorRecord> {
    fn from(p: DiscretePrior) -> Self {
        p.records()
    }
}

impl DiscretePrior {
    /// Builds a prior from `(θ, weight)` pairs in any order.
    ///
    /// Atoms closer than [`ATOM_MERGE_TOL`] are merged (weights added).
    /// Weights must be positive and sum to one within [`WEIGHT_SUM_TOL`].
    pub fn new<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<Atom> = Vec::new();
        for (theta, weight) in atoms {
            let theta = Probability::new(theta).map_err(|e| Error::InvalidPrior(e.to_string()))?;
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::InvalidPrior(format!(
                    "weight {weight} at atom {theta} is not positive"
                )));
            }
            raw.push(Atom { theta, weight });
        }
        if raw.is_empty() {
            return Err(Error::InvalidPrior("prior has no atoms".into()));
        }
        raw.sort_by(|a, b| a.theta.get().total_cmp(&b.theta.get()));

        let mut merged: Vec<Atom> = Vec::with_capacity(raw.len());
        for atom in raw {
            match merged.last_mut() {
                Some(last) if atom.theta.get() - last.theta.get() < ATOM_MERGE_TOL => {
                    last.weight += atom.weight;
                }
                _ => merged.push(atom),
            }
        }

        let total: f64 = merged.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidPrior(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(DiscretePrior { atoms: merged })
    }

    /// Like [`DiscretePrior::new`] but rescales the weights to sum to one.
    pub fn normalized<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let atoms: Vec<(f64, f64)> = atoms.into_iter().collect();
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidPrior(format!(
                "total weight {total} is not positive"
            )));
        }
        DiscretePrior::new(atoms.into_iter().map(|(t, w)| (t, w / total)))
    }

    /// Drops weights below `threshold` and renormalizes the rest.
    pub fn pruned(thetas: &[f64], weights: &[f64], threshold: f64) -> Result<Self> {
        assert_eq!(thetas.len(), weights.len());
        DiscretePrior::normalized(
            thetas
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w >= threshold)
                .map(|(&t, &w)| (t, w)),
        )
    }

    pub fn point_mass(theta: Probability) -> Self {
        DiscretePrior {
            atoms: vec![Atom { theta, weight: 1.0 }],
        }
    }

    /// The latent information prior `{0: 3/10, 1/2: 2/5, 1: 3/10}`.
    pub fn latent_information() -> Self {
        DiscretePrior::new([(0.0, 0.3), (0.5, 0.4), (1.0, 0.3)]).expect("valid prior")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.theta.get())
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }

    /// `∫ f dπ`.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.weight * f(a.theta.get())).sum()
    }

    /// Total-variation distance, matching atoms within [`ATOM_MERGE_TOL`].
    pub fn total_variation(&self, other: &DiscretePrior) -> f64 {
        let (a, b) = (&self.atoms, &other.atoms);
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < a.len() || j < b.len() {
            let ta = a.get(i).map_or(f64::INFINITY, |x| x.theta.get());
            let tb = b.get(j).map_or(f64::INFINITY, |x| x.theta.get());
            if (ta - tb).abs() < ATOM_MERGE_TOL {
                acc += (a[i].weight - b[j].weight).abs();
                i += 1;
                j += 1;
            } else if ta < tb {
                acc += a[i].weight;
                i += 1;
            } else {
                acc += b[j].weight;
                j += 1;
            }
        }
        0.5 * acc
    }

    pub fn records(&self) -> Vec<PriorRecord> {
        self.atoms
            .iter()
            .map(|a| PriorRecord {
                atom: a.theta.get(),
                weight: a.weight,
            })
            .collect()
    }

    /// Parses the prior file format and enforces the prior invariants.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let records: Vec<PriorRecord> =
            serde_json::from_str(s).map_err(|e| Error::PriorFile(e.to_string()))?;
        DiscretePrior::new(records.into_iter().map(|r| (r.atom, r.weight)))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.records()).expect("records serialize")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::PriorFile(format!("{}: {e}", path.display())))?;
        DiscretePrior::from_json_str(&text)
    }
}

/// `E θ` and `E θ²` under a prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub m1: f64,
    pub m2: f64,
}

impl MomentSummary {
    /// Largest deviation from the minimax moment condition `(1/2, 2/5)`.
    pub fn minimax_violation(&self) -> f64 {
        (self.m1 - MINIMAX_M1)
            .abs()
            .max((self.m2 - MINIMAX_M2).abs())
    }
}

pub fn moments(prior: &DiscretePrior) -> MomentSummary {
    MomentSummary {
        m1: prior.expect(|t| t),
        m2: prior.expect(|t| t * t),
    }
}

/// `δ0 = a/(a+b+1)`, `δ1 = (a+1)/(a+b+1)`.
pub fn beta_to_decision(hyper: BetaHyper) -> Decision {
    let n = hyper.a + hyper.b + 1.0;
    Decision {
        delta0: Probability::saturating(hyper.a / n),
        delta1: Probability::saturating((hyper.a + 1.0) / n),
    }
}

/// Inverse of [`beta_to_decision`] on the class `0 < δ0 < δ1 < 1`.
pub fn decision_to_beta(delta: &Decision) -> Result<BetaHyper> {
    let (d0, d1) = (delta.d0(), delta.d1());
    if !(delta.is_interior() && d0 < d1) {
        return Err(Error::domain(format!(
            "decision {delta} is not of the form 0 < delta0 < delta1 < 1"
        )));
    }
    let gap = d1 - d0;
    BetaHyper::new(d0 / gap, (1.0 - d1) / gap)
}

/// Posterior-mean rule: `δ1 = E[θ²]/E[θ]`, `δ0 = E[θ(1-θ)]/E[1-θ]`.
pub fn bayes_decision(prior: &DiscretePrior) -> Result<Decision> {
    let p1 = prior.expect(|t| t);
    let p0 = prior.expect(|t| 1.0 - t);
    if p1 <= 0.0 {
        return Err(Error::DegeneratePosterior(0.0));
    }
    if p0 <= 0.0 {
        return Err(Error::DegeneratePosterior(1.0));
    }
    let d1 = prior.expect(|t| t * t) / p1;
    let d0 = prior.expect(|t| t * (1.0 - t)) / p0;
    Ok(Decision {
        delta0: Probability::saturating(d0),
        delta1: Probability::saturating(d1),
    })
}

/// Average of `δ` and its mirror image `(1 - δ1, 1 - δ0)`.
pub fn symmetrize(delta: &Decision) -> Decision {
    let (d0, d1) = (delta.d0(), delta.d1());
    Decision {
        delta0: Probability::saturating(0.5 * (d0 + 1.0 - d1)),
        delta1: Probability::saturating(0.5 * (d1 + 1.0 - d0)),
    }
}

/// Whether the prior satisfies `E θ = 1/2` and `E θ² = 2/5` within `tol`.
pub fn is_minimax_prior(prior: &DiscretePrior, tol: f64) -> bool {
    moments(prior).minimax_violation() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn prior(atoms: &[(f64, f64)]) -> DiscretePrior {
        DiscretePrior::new(atoms.iter().copied()).unwrap()
    }

    fn assert_decision(d: Decision, d0: f64, d1: f64, eps: f64) {
        assert_abs_diff_eq!(d.d0(), d0, epsilon = eps);
        assert_abs_diff_eq!(d.d1(), d1, epsilon = eps);
    }

    #[test]
    fn beta_examples() {
        assert_decision(
            beta_to_decision(BetaHyper::new(1.0, 1.0).unwrap()),
            1.0 / 3.0,
            2.0 / 3.0,
            1e-15,
        );
        assert_decision(
            beta_to_decision(BetaHyper::symmetric(1.0 / 3.0).unwrap()),
            0.2,
            0.8,
            1e-15,
        );
        assert_decision(
            beta_to_decision(BetaHyper::symmetric(0.5).unwrap()),
            0.25,
            0.75,
            1e-15,
        );
        assert!(BetaHyper::new(0.0, 1.0).is_err());
        assert!(BetaHyper::new(1.0, -2.0).is_err());
    }

    #[test]
    fn beta_inverse_examples() {
        let h = decision_to_beta(&Decision::MINIMAX).unwrap();
        assert_abs_diff_eq!(h.a, 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(h.b, 1.0 / 3.0, epsilon = 1e-14);
        let h = decision_to_beta(&Decision::new(1.0 / 3.0, 2.0 / 3.0).unwrap()).unwrap();
        assert_abs_diff_eq!(h.a, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(h.b, 1.0, epsilon = 1e-14);
        let h = decision_to_beta(&Decision::new(0.25, 0.75).unwrap()).unwrap();
        assert_abs_diff_eq!(h.a, 0.5, epsilon = 1e-14);
        assert!(decision_to_beta(&Decision::new(0.5, 0.5).unwrap()).is_err());
        assert!(decision_to_beta(&Decision::MLE).is_err());
    }

    #[test]
    fn bayes_examples() {
        assert_decision(
            bayes_decision(&DiscretePrior::latent_information()).unwrap(),
            0.2,
            0.8,
            1e-15,
        );
        let ml = prior(&[(0.0, 0.4), (1.0, 0.6)]);
        assert_eq!(bayes_decision(&ml).unwrap(), Decision::MLE);
        let d = bayes_decision(&prior(&[(0.25, 0.5), (0.75, 0.5)])).unwrap();
        assert_decision(d, 0.375, 0.625, 1e-15);
    }

    #[test]
    fn degenerate_posterior() {
        let at0 = DiscretePrior::point_mass(Probability::ZERO);
        assert_eq!(bayes_decision(&at0), Err(Error::DegeneratePosterior(0.0)));
        let at1 = DiscretePrior::point_mass(Probability::ONE);
        assert_eq!(bayes_decision(&at1), Err(Error::DegeneratePosterior(1.0)));
    }

    #[test]
    fn symmetrize_examples() {
        assert!(symmetrize(&Decision::MINIMAX).max_abs_diff(&Decision::MINIMAX) <= 1e-15);
        assert_decision(
            symmetrize(&Decision::new(0.1, 0.4).unwrap()),
            0.35,
            0.65,
            1e-15,
        );
    }

    #[test]
    fn moment_examples() {
        let m = moments(&DiscretePrior::latent_information());
        assert_abs_diff_eq!(m.m1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.m2, 0.4, epsilon = 1e-15);
        let m = moments(&DiscretePrior::point_mass(Probability::HALF));
        assert_eq!((m.m1, m.m2), (0.5, 0.25));
        let m = moments(&prior(&[(0.0, 0.5), (1.0, 0.5)]));
        assert_eq!((m.m1, m.m2), (0.5, 0.5));
    }

    #[test]
    fn minimax_prior_examples() {
        assert!(is_minimax_prior(
            &DiscretePrior::latent_information(),
            DEFAULT_MOMENT_TOL
        ));
        assert!(!is_minimax_prior(
            &prior(&[(0.0, 0.5), (1.0, 0.5)]),
            DEFAULT_MOMENT_TOL
        ));
        assert!(!is_minimax_prior(
            &DiscretePrior::point_mass(Probability::HALF),
            DEFAULT_MOMENT_TOL
        ));
    }

    #[test]
    fn prior_invariants() {
        assert!(DiscretePrior::new([(0.5, 0.5), (0.2, 0.4)]).is_err());
        assert!(DiscretePrior::new([(0.5, 1.1), (0.2, -0.1)]).is_err());
        assert!(DiscretePrior::new([(1.5, 1.0)]).is_err());
        assert!(DiscretePrior::new(Vec::new()).is_err());
        let p = prior(&[(0.7, 0.25), (0.1, 0.5), (0.7 + 1e-13, 0.25)]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.atoms()[0].theta.get(), 0.1);
        assert_eq!(p.atoms()[1].weight, 0.5);
    }

    #[test]
    fn prior_file_format() {
        let p = DiscretePrior::from_json_str(
            r#"[{"atom": 1.0, "weight": 0.3}, {"atom": 0.0, "weight": 0.3}, {"atom": 0.5, "weight": 0.4}]"#,
        )
        .unwrap();
        assert_eq!(p, DiscretePrior::latent_information());
        assert!(DiscretePrior::from_json_str(r#"[{"atom": 0.5, "weight": 0.9}]"#).is_err());
        assert!(DiscretePrior::from_json_str(r#"[{"atom": 0.5}]"#).is_err());
        assert!(DiscretePrior::from_json_str(r#"{"atom": 0.5, "weight": 1}"#).is_err());
        let back = DiscretePrior::from_json_str(&p.to_json_string()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn total_variation_distance() {
        let a = DiscretePrior::latent_information();
        let b = prior(&[(0.0, 0.3), (0.49, 0.4), (1.0, 0.3)]);
        assert_abs_diff_eq!(a.total_variation(&b), 0.4, epsilon = 1e-15);
        assert_eq!(a.total_variation(&a), 0.0);
    }

    proptest! {
        #[test]
        fn beta_round_trip(a in 0.01f64..100.0, b in 0.01f64..100.0) {
            let h = decision_to_beta(&beta_to_decision(BetaHyper::new(a, b).unwrap())).unwrap();
            let back = beta_to_decision(h);
            let orig = beta_to_decision(BetaHyper::new(a, b).unwrap());
            prop_assert!(back.max_abs_diff(&orig) <= 1e-14);
            prop_assert!((h.a - a).abs() <= 1e-9 * a.max(1.0) && (h.b - b).abs() <= 1e-9 * b.max(1.0));
        }

        #[test]
        fn symmetrize_is_idempotent(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let s = symmetrize(&Decision::new(a, b).unwrap());
            prop_assert!((s.d0() + s.d1() - 1.0).abs() <= 1e-15);
            prop_assert!(symmetrize(&s).max_abs_diff(&s) <= 1e-15);
        }

        #[test]
        fn moments_are_consistent(
            atoms in proptest::collection::vec((0.0f64..=1.0, 0.01f64..1.0), 1..8)
        ) {
            let p = DiscretePrior::normalized(atoms).unwrap();
            let m = moments(&p);
            prop_assert!(m.m2 <= m.m1 + 1e-15 && m.m1 <= 1.0 + 1e-15 && m.m2 >= 0.0);
            prop_assert!(m.m1 * m.m1 <= m.m2 + 1e-15);
        }
    }
}
