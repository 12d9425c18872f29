//! Exact-rational two-phase simplex with Bland's rule.
//!
//! Small dense tableau implementation. Bland's rule (always the lowest
//! eligible index) prevents cycling, and every number is a `BigRational`,
//! so the optimum is exact and deterministic.

use num_traits::{Signed, Zero};

use crate::ratio::{rat_int, Rat};

struct Tableau {
    /// `m` rows of width `ncols + 1`; the last entry of each row is the rhs.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let factor = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x /= factor.clone();
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let scale = self.rows[i][col].clone();
            for j in 0..=self.ncols {
                let delta = scale.clone() * self.rows[row][j].clone();
                self.rows[i][j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost · x` over the current feasible basis, restricted to
    /// columns accepted by `allowed`. Returns the optimal objective value.
    fn optimize(&mut self, cost: &[Rat], allowed: &dyn Fn(usize) -> bool) -> Rat {
        loop {
            // reduced costs relative to the current basis
            let mut entering = None;
            'cols: for j in 0..self.ncols {
                if !allowed(j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !cost[self.basis[i]].is_zero() && !row[j].is_zero() {
                        r -= cost[self.basis[i]].clone() * row[j].clone();
                    }
                }
                if r.is_negative() {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let Some(col) = entering else {
                break;
            };
            // ratio test; ties resolved by the smallest basic-variable index
            let mut leaving: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = self.rhs(i).clone() / self.rows[i][col].clone();
                    let better = match &leaving {
                        None => true,
                        Some((prev, best)) => {
                            ratio < *best
                                || (ratio == *best && self.basis[i] < self.basis[*prev])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let (row, _) = leaving.expect("objective unbounded below; malformed program");
            self.pivot(row, col);
        }
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| cost[self.basis[i]].clone() * row[self.ncols].clone())
            .fold(rat_int(0), |acc, t| acc + t)
    }
}

/// Minimizes `cost · x` subject to `constraints · x = rhs` and `x >= 0`.
///
/// The program must be feasible and bounded (all callers in this crate pose
/// such programs); violations panic. Returns the optimum and a minimizing
/// point.
pub(crate) fn simplex_min(
    constraints: &[Vec<Rat>],
    rhs: &[Rat],
    cost: &[Rat],
) -> (Rat, Vec<Rat>) {
    let m = constraints.len();
    let n = cost.len();
    let ncols = n + m; // artificial variable per row
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        assert_eq!(constraints[i].len(), n, "constraint width mismatch");
        let flip = rhs[i].is_negative();
        let mut row = Vec::with_capacity(ncols + 1);
        for j in 0..n {
            let v = constraints[i][j].clone();
            row.push(if flip { -v } else { v });
        }
        for k in 0..m {
            row.push(rat_int(i64::from(k == i)));
        }
        row.push(if flip { -rhs[i].clone() } else { rhs[i].clone() });
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis: (n..n + m).collect(), ncols };

    // phase 1: drive the artificial variables to zero
    let mut phase1_cost = vec![rat_int(0); ncols];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = rat_int(1);
    }
    let infeasibility = tab.optimize(&phase1_cost, &|_| true);
    assert!(infeasibility.is_zero(), "infeasible program");

    // pivot remaining artificial variables out of the basis where possible
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                tab.pivot(i, col);
            }
            // an all-zero row is a redundant constraint; its artificial
            // stays basic at value zero and never re-enters below
        }
    }

    // phase 2: the real objective, artificial columns barred
    let mut phase2_cost = cost.to_vec();
    phase2_cost.resize(ncols, rat_int(0));
    let optimum = tab.optimize(&phase2_cost, &|j| j < n);

    let mut x = vec![rat_int(0); n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rhs(i).clone();
        }
    }
    (optimum, x)
}
