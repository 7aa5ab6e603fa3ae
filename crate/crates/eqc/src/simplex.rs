//! Exact-rational linear programming.
//!
//! A small dense two-phase simplex over `BigRational`, sufficient for the
//! desk-scale programs produced by the bound computations.  Minimizes
//! `c . x` subject to `A x = b`, `x >= 0`.  Bland's smallest-index rule on
//! both the entering and the leaving choice guarantees termination; all
//! arithmetic is exact, so "optimal" means optimal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplexError {
    #[error("constraint matrix shape does not match objective/right-hand side")]
    ShapeMismatch,
}

/// `minimize objective . x  subject to  constraints x = rhs, x >= 0`.
#[derive(Debug, Clone)]
pub struct StandardLp {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Vec<BigRational>>,
    pub rhs: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRational, solution: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        self.rhs[r] /= &p;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.rows[i].len() {
                let d = &self.rows[r][j] * &f;
                self.rows[i][j] -= d;
            }
            let d = &self.rhs[r] * &f;
            self.rhs[i] -= d;
        }
        self.basis[r] = c;
    }

    /// Reduced costs for raw costs `c`: `c_j - c_B . column_j`.
    fn reduced_costs(&self, c: &[BigRational]) -> Vec<BigRational> {
        let n = c.len();
        let mut out = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate().take(n) {
                let d = &c[b] * &self.rows[i][j];
                *o -= d;
            }
        }
        out
    }

    /// One simplex run under Bland's rule over the first `c.len()` columns.
    /// Returns `false` on detecting unboundedness.
    fn optimize(&mut self, c: &[BigRational]) -> bool {
        loop {
            let reduced = self.reduced_costs(c);
            let entering = (0..c.len()).find(|&j| reduced[j].is_negative());
            let Some(e) = entering else { return true };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][e].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let cur = &self.rhs[i] / &self.rows[i][e];
                        let best = &self.rhs[l] / &self.rows[l][e];
                        cur < best || (cur == best && self.basis[i] < self.basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            let Some(l) = leave else { return false };
            self.pivot(l, e);
        }
    }
}

/// Two-phase simplex.
pub fn solve(lp: &StandardLp) -> Result<LpOutcome, SimplexError> {
    let m = lp.constraints.len();
    let n = lp.objective.len();
    if lp.rhs.len() != m || lp.constraints.iter().any(|r| r.len() != n) {
        return Err(SimplexError::ShapeMismatch);
    }

    // Phase 1: nonnegative right-hand side, one artificial per row.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for (row, b) in lp.constraints.iter().zip(&lp.rhs) {
        if b.is_negative() {
            rows.push(row.iter().map(|x| -x).collect());
            rhs.push(-b);
        } else {
            rows.push(row.clone());
            rhs.push(b.clone());
        }
    }
    let total = n + m;
    for (i, row) in rows.iter_mut().enumerate() {
        row.extend((0..m).map(|k| {
            if k == i { BigRational::one() } else { BigRational::zero() }
        }));
    }
    let mut t = Tableau { rows, rhs, basis: (n..total).collect() };
    let phase1_cost: Vec<BigRational> = (0..total)
        .map(|j| if j < n { BigRational::zero() } else { BigRational::one() })
        .collect();
    let bounded = t.optimize(&phase1_cost);
    debug_assert!(bounded, "phase-1 objective is bounded below by zero");
    let infeasibility: BigRational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&b, _)| b >= n)
        .map(|(_, v)| v.clone())
        .sum();
    if !infeasibility.is_zero() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            if let Some(c) = (0..n).find(|&c| !t.rows[r][c].is_zero()) {
                t.pivot(r, c);
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    for row in t.rows.iter_mut() {
        row.truncate(n);
    }

    // Phase 2 over the original columns.
    if !t.optimize(&lp.objective) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut solution = vec![BigRational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        solution[b] = t.rhs[i].clone();
    }
    let value: BigRational = lp
        .objective
        .iter()
        .zip(&solution)
        .map(|(c, x)| c * x)
        .sum();
    Ok(LpOutcome::Optimal { value, solution })
}

/// Convenience constructor from integer data.
pub fn lp_from_ints(objective: &[i64], constraints: &[Vec<i64>], rhs: &[i64]) -> StandardLp {
    let conv = |v: &[i64]| v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect();
    StandardLp {
        objective: conv(objective),
        constraints: constraints.iter().map(|r| conv(r)).collect(),
        rhs: conv(rhs),
    }
}
