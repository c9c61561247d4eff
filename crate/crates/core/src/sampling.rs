//! Random decisions and priors for randomized verification.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::bayes::{moments, DiscretePrior, MINIMAX_M1, MINIMAX_M2};
use crate::model::Decision;

/// Uniform on `0 < δ1 < δ0 < 1`.
pub fn c_greater<R: Rng + ?Sized>(rng: &mut R) -> Decision {
    loop {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let (hi, lo) = if u > v { (u, v) } else { (v, u) };
        if lo > 0.0 && hi > lo && hi < 1.0 {
            return Decision::new(hi, lo).expect("in range");
        }
    }
}

/// Uniform on the open square.
pub fn interior<R: Rng + ?Sized>(rng: &mut R) -> Decision {
    loop {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        if u > 0.0 && v > 0.0 {
            return Decision::new(u, v).expect("in range");
        }
    }
}

/// A boundary point other than `(0, 1)`: uniform on a random edge, with the
/// four corners drawn with extra probability.
pub fn boundary_other<R: Rng + ?Sized>(rng: &mut R) -> Decision {
    loop {
        let s: f64 = if rng.random_bool(0.1) {
            if rng.random_bool(0.5) {
                0.0
            } else {
                1.0
            }
        } else {
            rng.random()
        };
        let d = match rng.random_range(0..4) {
            0 => Decision::new(0.0, s),
            1 => Decision::new(1.0, s),
            2 => Decision::new(s, 0.0),
            _ => Decision::new(s, 1.0),
        }
        .expect("in range");
        if d != Decision::MLE {
            return d;
        }
    }
}

/// A random prior with `n` atoms uniform on `[0, 1]` and uniform weights,
/// normalized.
pub fn prior<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DiscretePrior {
    loop {
        let atoms: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random(), rng.random_range(0.01..1.0)))
            .collect();
        if let Ok(p) = DiscretePrior::normalized(atoms) {
            let m = moments(&p);
            if m.m1 > 0.0 && m.m1 < 1.0 {
                return p;
            }
        }
    }
}

/// A random prior with `n >= 3` atoms satisfying `E θ = 1/2`,
/// `E θ² = 2/5` to rounding.
///
/// `n - 3` atoms are placed uniformly with random weights of total mass at
/// most 0.4; the remaining three atoms are drawn near `0`, `1/2` and `1` and
/// their weights solve the moment equations. Draws with a nonpositive weight
/// are rejected.
pub fn minimax_prior<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DiscretePrior {
    assert!(n >= 3);
    loop {
        let free_mass = rng.random_range(0.0..0.4);
        let free: Vec<(f64, f64)> = (0..n - 3)
            .map(|_| (rng.random::<f64>(), rng.random_range(0.05..1.0)))
            .collect();
        let raw: f64 = free.iter().map(|a| a.1).sum();
        let free: Vec<(f64, f64)> = free
            .into_iter()
            .map(|(t, w)| (t, w / raw.max(1e-300) * free_mass))
            .collect();
        let used: f64 = free.iter().map(|a| a.1).sum();

        let anchors: [f64; 3] = [
            rng.random_range(0.0..0.15),
            rng.random_range(0.35..0.65),
            rng.random_range(0.85..=1.0),
        ];
        let m = Matrix3::new(
            1.0,
            1.0,
            1.0, //
            anchors[0],
            anchors[1],
            anchors[2], //
            anchors[0].powi(2),
            anchors[1].powi(2),
            anchors[2].powi(2),
        );
        let target = Vector3::new(
            1.0 - used,
            MINIMAX_M1 - free.iter().map(|(t, w)| t * w).sum::<f64>(),
            MINIMAX_M2 - free.iter().map(|(t, w)| t * t * w).sum::<f64>(),
        );
        let Some(w) = m.lu().solve(&target) else {
            continue;
        };
        if w.iter().any(|&v| v <= 1e-6) {
            continue;
        }
        let mut atoms = free;
        atoms.extend(anchors.iter().copied().zip(w.iter().copied()));
        let mut thetas: Vec<f64> = atoms.iter().map(|a| a.0).collect();
        thetas.sort_by(f64::total_cmp);
        if thetas.windows(2).any(|p| p[1] - p[0] < 1e-6) {
            continue;
        }
        if let Ok(p) = DiscretePrior::new(atoms) {
            if moments(&p).minimax_violation() <= 1e-12 {
                return p;
            }
        }
    }
}

/// A random prior whose moments miss `(1/2, 2/5)` by at least `min_violation`
/// in some coordinate. Half of the draws are small perturbations of minimax
/// priors, so violations near the threshold are exercised.
pub fn moment_violating_prior<R: Rng + ?Sized>(rng: &mut R, min_violation: f64) -> DiscretePrior {
    loop {
        let p = if rng.random_bool(0.5) {
            let n = rng.random_range(1..8);
            prior(rng, n)
        } else {
            let base = minimax_prior(rng, 5);
            let scale = rng.random_range(0.0..0.05);
            let atoms: Vec<(f64, f64)> = base
                .atoms()
                .iter()
                .map(|a| {
                    (
                        a.theta.get(),
                        a.weight * (1.0 + scale * rng.random_range(-1.0..1.0)),
                    )
                })
                .collect();
            match DiscretePrior::normalized(atoms) {
                Ok(p) => p,
                Err(_) => continue,
            }
        };
        let m = moments(&p);
        if m.m1 > 0.0 && m.m1 < 1.0 && m.minimax_violation() >= min_violation {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{classify, DecisionClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_respect_their_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(classify(&c_greater(&mut rng)), DecisionClass::CGreater);
            assert_eq!(
                classify(&boundary_other(&mut rng)),
                DecisionClass::BoundaryOther
            );
        }
        for _ in 0..200 {
            let p = minimax_prior(&mut rng, 5);
            assert_eq!(p.len(), 5);
            assert!(moments(&p).minimax_violation() <= 1e-12);
            let q = moment_violating_prior(&mut rng, 1e-3);
            assert!(moments(&q).minimax_violation() >= 1e-3);
        }
    }
}
