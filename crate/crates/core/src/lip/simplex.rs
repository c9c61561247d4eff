//! Dense two-phase tableau simplex for small equality-constrained programs
//!
//! ```text
//! minimize cᵀx  subject to  A x = b,  x >= 0
//! ```
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems. Intended for a handful of constraints and up to tens of
//! thousands of columns.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Pivot and reduced-cost tolerance.
const EPS: f64 = 1e-11;
/// Phase-one objective above this means the program is infeasible.
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Column index of each basic variable at the optimum.
    pub basis: Vec<usize>,
    /// A nonbasic column has zero reduced cost, so the optimum may not be unique.
    pub alternative_optima: bool,
    pub pivots: usize,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows + 1` rows of `cols + 1` entries; the last row holds reduced
    /// costs and the last column the right-hand side.
    data: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn row_mut(&mut self, r: usize) -> &mut [f64] {
        let w = self.cols + 1;
        &mut self.data[r * w..(r + 1) * w]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let inv = 1.0 / self.at(pr, pc);
        self.row_mut(pr).iter_mut().for_each(|v| *v *= inv);
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc);
            if factor != 0.0 {
                let row = self.row_mut(r);
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Runs Bland's rule on the columns accepted by `allowed`.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> Result<()> {
        loop {
            let entering = (0..self.cols).find(|&j| allowed(j) && self.at(self.rows, j) < -EPS);
            let Some(pc) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > EPS {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - EPS
                                || (ratio <= lratio + EPS && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(pr, pc);
        }
    }

    fn set_objective(&mut self, cost: &[f64]) {
        let (rows, cols) = (self.rows, self.cols);
        let mut obj = vec![0.0; cols + 1];
        obj[..cost.len()].copy_from_slice(cost);
        for r in 0..rows {
            let cb = cost.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for (c, o) in obj.iter_mut().enumerate() {
                    *o -= cb * self.at(r, c);
                }
            }
        }
        self.row_mut(rows).copy_from_slice(&obj);
    }
}

/// Solves `min cᵀx, A x = b, x >= 0` where `a` holds the constraint rows.
pub fn solve(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));

    // Columns: n structural, m artificial, then the right-hand side.
    let cols = n + m;
    let mut data = vec![0.0; (m + 1) * (cols + 1)];
    for r in 0..m {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut data[r * (cols + 1)..(r + 1) * (cols + 1)];
        for j in 0..n {
            row[j] = sign * a[r][j];
        }
        row[n + r] = 1.0;
        row[cols] = sign * b[r];
    }
    let mut t = Tableau {
        rows: m,
        cols,
        data,
        basis: (n..n + m).collect(),
        pivots: 0,
    };

    let mut phase_one = vec![0.0; cols];
    phase_one[n..].iter_mut().for_each(|v| *v = 1.0);
    t.set_objective(&phase_one);
    t.optimize(|_| true)?;
    if -t.rhs(m) > FEAS_TOL {
        return Err(Error::Infeasible);
    }

    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(pc) = (0..n).find(|&j| t.at(r, j).abs() > EPS) {
                t.pivot(r, pc);
            }
        }
    }

    t.set_objective(c);
    t.optimize(|j| j < n)?;

    // Recompute the basic solution from the original data for accuracy.
    let structural: Vec<(usize, usize)> = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &j)| j < n)
        .map(|(r, &j)| (r, j))
        .collect();
    let mut x = vec![0.0; n];
    let k = structural.len();
    let bmat = DMatrix::from_fn(m, k, |r, i| a[r][structural[i].1]);
    let rhs = DVector::from_column_slice(b);
    let refined = bmat.clone().svd(true, true).solve(&rhs, 1e-14).ok();
    for (i, &(r, j)) in structural.iter().enumerate() {
        let tableau_value = t.rhs(r);
        let value = match &refined {
            Some(sol) if (sol[i] - tableau_value).abs() < 1e-6 => sol[i],
            _ => tableau_value,
        };
        x[j] = value.max(0.0);
    }

    let in_basis = |j: usize| t.basis.contains(&j);
    let alternative_optima = (0..n).any(|j| !in_basis(j) && t.at(m, j).abs() <= EPS);
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();

    Ok(LpSolution {
        x,
        objective,
        basis: t.basis.clone(),
        alternative_optima,
        pivots: t.pivots,
    })
}
