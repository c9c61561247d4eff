//! Univariate search helpers: scan-then-golden-section minimization and
//! root bracketing with bisection.

/// Result of a univariate minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` on `[lo, hi]`.
///
/// Scans `scan_n` equally spaced points, runs golden-section search on the
/// two cells around the best scan point until the bracket is narrower than
/// `tol`, and finally compares against both endpoints so that boundary
/// minima are returned exactly.
pub fn minimize_scalar(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    scan_n: usize,
    tol: f64,
) -> Minimum {
    assert!(lo <= hi && scan_n >= 2);
    if hi == lo {
        return Minimum {
            x: lo,
            value: f(lo),
        };
    }
    let step = (hi - lo) / (scan_n - 1) as f64;
    let point = |i: usize| {
        if i == scan_n - 1 {
            hi
        } else {
            lo + step * i as f64
        }
    };

    let mut best = Minimum {
        x: lo,
        value: f(lo),
    };
    let mut best_i = 0;
    for i in 1..scan_n {
        let x = point(i);
        let v = f(x);
        if v < best.value {
            best = Minimum { x, value: v };
            best_i = i;
        }
    }

    let mut a = point(best_i.saturating_sub(1));
    let mut b = point((best_i + 1).min(scan_n - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c <= a || d >= b {
            break;
        }
    }
    let x = 0.5 * (a + b);
    for cand in [
        Minimum { x, value: f(x) },
        Minimum {
            x: lo,
            value: f(lo),
        },
        Minimum {
            x: hi,
            value: f(hi),
        },
    ] {
        if cand.value <= best.value {
            best = cand;
        }
    }
    best
}

/// Bisects a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite signs.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots of `f` on `[lo, hi]` detected as sign changes on a grid of `n`
/// cells, each refined by bisection to `tol`.
pub fn bracket_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize, tol: f64) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + step * i as f64 })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..n {
        if ys[i] == 0.0 {
            roots.push(xs[i]);
        } else if ys[i] * ys[i + 1] < 0.0 {
            roots.push(bisect(&f, xs[i], xs[i + 1], tol));
        }
    }
    if ys[n] == 0.0 {
        roots.push(xs[n]);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{binary_entropy, Probability};

    #[test]
    fn golden_section_interior_and_boundary() {
        let m = minimize_scalar(|x| (x - 0.3).powi(2), 0.0, 1.0, 11, 1e-12);
        assert!((m.x - 0.3).abs() < 1e-6);
        let m = minimize_scalar(|x| x, 0.0, 1.0, 11, 1e-12);
        assert_eq!(m.x, 0.0);
        let m = minimize_scalar(|x| -x, 0.0, 0.5, 11, 1e-12);
        assert_eq!(m.x, 0.5);
    }

    #[test]
    fn roots_of_cubic() {
        let r = bracket_roots(|x| (x - 0.1) * (x - 0.5) * (x - 0.8), 0.0, 1.0, 97, 1e-14);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([0.1, 0.5, 0.8]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    /// S(θ) + 3θ² - 3θ - 0.04 has four distinct zeros in (0, 1), so a prior
    /// supported on them leaves the four moment equations (1, θ, θ², S)
    /// linearly dependent.
    #[test]
    fn four_zero_degenerate_example() {
        let f =
            |t: f64| binary_entropy(Probability::new(t).unwrap()) + 3.0 * t * t - 3.0 * t - 0.04;
        let roots = bracket_roots(f, 0.0, 1.0, 10_000, 1e-14);
        assert_eq!(roots.len(), 4, "{roots:?}");
        for w in roots.windows(2) {
            assert!(w[1] - w[0] > 1e-3);
        }
        // symmetric about 1/2
        assert!((roots[0] + roots[3] - 1.0).abs() < 1e-12);
        assert!((roots[1] + roots[2] - 1.0).abs() < 1e-12);
    }
}
