//! Equilibrium verification.
//!
//! An exponent assignment `mu` is a detailed-balance equilibrium at base `c`
//! exactly when every reaction is balanced, i.e. `sum_P v[P] mu[P] = 0` for
//! every conserved vector `v` — equivalently, when `mu` lies in the row
//! space of the conservation matrix (`A^T lambda = mu` is solvable).  Both
//! views are computed exactly by [`check_balance`]: per-generator residuals
//! plus a rational solve for `lambda`, with an empirical rank comparison
//! between the generator span and the kernel of `A` (the residual test
//! covers all reactions only if the generators span the kernel; the
//! certificate reports rather than assumes this).
//!
//! The numeric route recovers concentrations from conserved monomer totals
//! by maximizing the strictly concave dual
//!
//! ```text
//! phi(lambda) = lambda . x0 - sum_P exp((A^T lambda)_P)
//! ```
//!
//! whose stationary point satisfies `A x = x0` with `x = exp(A^T lambda)`
//! — detailed balance holds by construction.  A damped Newton iteration
//! from the zero vector, with backtracking and a monotonicity assertion on
//! `phi`, implements this in double precision ([`numeric_equilibrium`]) and
//! in configurable-precision rational arithmetic
//! ([`numeric_equilibrium_hp`]) for instances whose concentration range
//! exceeds what doubles can carry.  Conservation matrices with repeated
//! monomer rows make the dual Hessian singular; the factorization skips
//! null pivots, which is sound because the gradient stays in the range of
//! the Hessian whenever the totals are feasible.
//!
//! [`enumerate_canonical`] is the brute-force oracle: every net canonical
//! reaction within a reactant budget, found by enumerating reactant
//! multisets over the on-target set and all decompositions of their monomer
//! pool into polymers.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

use crate::linalg::{integer_kernel_basis, solve_rational, span_rank, to_bigint_matrix};
use crate::model::{OnTargetSpec, ReactionVec, System};
use crate::ratio::{exp_decimal, render_ratio, round_sig};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{0} must be strictly positive and finite")]
    NonPositiveInput(String),
    #[error("input length does not match the system")]
    DimensionMismatch,
    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NonConvergence { iterations: usize, residual: String },
    #[error("enumeration exceeded the step budget ({0} steps)")]
    BudgetExceeded(usize),
}

/// Symbolic balance certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumCertificate {
    /// Whether `A^T lambda = mu` is exactly solvable.
    pub in_rowspace: bool,
    /// A solving `lambda`, one entry per monomer.
    pub lambda: Option<Vec<BigRational>>,
    /// Per-generator balance residual `sum_P v[P] mu[P]`.
    pub residuals: Vec<(String, BigRational)>,
    /// Dimension of the kernel of the conservation matrix.
    pub kernel_rank: usize,
    /// Dimension of the span of the generating set.
    pub basis_rank: usize,
}

impl EquilibriumCertificate {
    /// The generator residual test covers every reaction only when the
    /// generators span the kernel; a mismatch is reported, not assumed away.
    pub fn spans_kernel(&self) -> bool {
        self.kernel_rank == self.basis_rank
    }

    pub fn pass(&self) -> bool {
        self.in_rowspace && self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn to_json(&self, system: &System) -> serde_json::Value {
        json!({
            "in_rowspace": self.in_rowspace,
            "lambda": self.lambda.as_ref().map(|l| {
                system
                    .monomers()
                    .iter()
                    .zip(l)
                    .map(|(m, v)| (m.as_str().to_string(), render_ratio(v)))
                    .collect::<std::collections::BTreeMap<_, _>>()
            }),
            "residuals": self.residuals.iter().map(|(name, r)| {
                json!({ "reaction": name, "value": render_ratio(r) })
            }).collect::<Vec<_>>(),
            "kernel_rank": self.kernel_rank,
            "basis_rank": self.basis_rank,
            "spans_kernel": self.spans_kernel(),
            "pass": self.pass(),
        })
    }
}

/// Checks that the exponent vector `mu` (polymer order) is balanced:
/// exact residual per generator and an exact rational solve of
/// `A^T lambda = mu`.
pub fn check_balance(
    system: &System,
    mu: &[BigRational],
    basis: &[ReactionVec],
) -> EquilibriumCertificate {
    assert_eq!(mu.len(), system.polymer_count(), "one exponent per polymer");
    let residuals: Vec<(String, BigRational)> = basis
        .iter()
        .map(|v| {
            let r: BigRational = v
                .net()
                .iter()
                .zip(mu)
                .map(|(&e, m)| BigRational::from(BigInt::from(e)) * m)
                .sum();
            (v.render(system), r)
        })
        .collect();

    let a = system.conservation();
    let m = system.monomer_count();
    let n = system.polymer_count();
    let transpose: Vec<Vec<BigRational>> = (0..n)
        .map(|j| (0..m).map(|i| BigRational::from(BigInt::from(a[i][j]))).collect())
        .collect();
    let lambda = solve_rational(&transpose, mu);
    let in_rowspace = lambda.is_some();
    debug_assert!(
        !in_rowspace || residuals.iter().all(|(_, r)| r.is_zero()),
        "a row-space exponent vector balances every conserved vector"
    );

    let kernel_rank = integer_kernel_basis(&to_bigint_matrix(a)).len();
    let basis_rank = span_rank(&basis.iter().map(|v| v.net().to_vec()).collect::<Vec<_>>());

    EquilibriumCertificate { in_rowspace, lambda, residuals, kernel_rank, basis_rank }
}

/// LDL^T solve for a symmetric positive semidefinite `h`, skipping null
/// pivots (rank-deficient directions get a zero step component).
fn ldlt_solve_f64(mut h: Vec<Vec<f64>>, b: &[f64]) -> Vec<f64> {
    let m = b.len();
    let diag0: Vec<f64> = (0..m).map(|k| h[k][k].abs()).collect();
    let mut d = vec![0.0f64; m];
    let mut dead = vec![false; m];
    for k in 0..m {
        let mut pivot = h[k][k];
        for j in 0..k {
            if !dead[j] {
                pivot -= h[k][j] * h[k][j] * d[j];
            }
        }
        if pivot <= 1e-12 * diag0[k] {
            dead[k] = true;
            continue;
        }
        d[k] = pivot;
        for i in (k + 1)..m {
            let mut v = h[i][k];
            for j in 0..k {
                if !dead[j] {
                    v -= h[i][j] * h[k][j] * d[j];
                }
            }
            h[i][k] = v / pivot;
        }
    }
    let mut z = b.to_vec();
    for k in 0..m {
        if dead[k] {
            z[k] = 0.0;
            continue;
        }
        for j in 0..k {
            if !dead[j] {
                z[k] -= h[k][j] * z[j];
            }
        }
    }
    for k in 0..m {
        if !dead[k] {
            z[k] /= d[k];
        }
    }
    for k in (0..m).rev() {
        if dead[k] {
            continue;
        }
        for i in (k + 1)..m {
            if !dead[i] {
                z[k] -= h[i][k] * z[i];
            }
        }
    }
    z
}

/// Recovers polymer concentrations from conserved monomer totals by damped
/// Newton ascent on the dual, in double precision.  Deterministic from the
/// zero start.
pub fn numeric_equilibrium(
    system: &System,
    monomer_conc: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, VerifyError> {
    let m = system.monomer_count();
    let n = system.polymer_count();
    if monomer_conc.len() != m {
        return Err(VerifyError::DimensionMismatch);
    }
    if monomer_conc.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(VerifyError::NonPositiveInput("monomer totals".into()));
    }
    if !(tol > 0.0) {
        return Err(VerifyError::NonPositiveInput("tolerance".into()));
    }
    let a = system.conservation();
    let concentrations = |lam: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|j| {
                let t: f64 = (0..m).map(|i| a[i][j] as f64 * lam[i]).sum();
                t.exp()
            })
            .collect()
    };
    let phi = |lam: &[f64], x: &[f64]| -> f64 {
        let linear: f64 = lam.iter().zip(monomer_conc).map(|(l, x0)| l * x0).sum();
        linear - x.iter().sum::<f64>()
    };
    let scale = monomer_conc.iter().cloned().fold(0.0f64, f64::max);

    let mut lam = vec![0.0f64; m];
    let mut x = concentrations(&lam);
    let mut value = phi(&lam, &x);
    let mut residual_norm = f64::INFINITY;
    for _ in 0..max_iter {
        let grad: Vec<f64> = (0..m)
            .map(|i| {
                let ax: f64 = (0..n).map(|j| a[i][j] as f64 * x[j]).sum();
                monomer_conc[i] - ax
            })
            .collect();
        residual_norm = grad.iter().cloned().fold(0.0f64, |acc, g| acc.max(g.abs()));
        if residual_norm <= tol * scale {
            return Ok(x);
        }
        let h: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| (0..n).map(|j| a[i][j] as f64 * a[k][j] as f64 * x[j]).sum())
                    .collect()
            })
            .collect();
        let mut step = ldlt_solve_f64(h, &grad);
        let mut ascent: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
        if !(ascent > 0.0) || !ascent.is_finite() {
            // Fall back to plain gradient ascent on a defective step.
            step = grad.clone();
            ascent = grad.iter().map(|g| g * g).sum();
        }
        let mut t = 1.0f64;
        // Near the optimum the Armijo improvement underflows the objective's
        // ulp; the slack keeps full Newton steps acceptable there, where the
        // contraction itself finishes the job.
        let slack = 1e-14 * (1.0 + value.abs());
        loop {
            let cand: Vec<f64> = lam.iter().zip(&step).map(|(l, s)| l + t * s).collect();
            let cand_x = concentrations(&cand);
            let cand_value = phi(&cand, &cand_x);
            if cand_value.is_finite() && cand_value >= value + 1e-4 * t * ascent - slack {
                assert!(
                    cand_value >= value - slack,
                    "dual objective must not decrease beyond rounding"
                );
                lam = cand;
                x = cand_x;
                value = cand_value;
                break;
            }
            t *= 0.5;
            if t < 1e-18 {
                return Err(VerifyError::NonConvergence {
                    iterations: max_iter,
                    residual: format!("{residual_norm:.3e}"),
                });
            }
        }
    }
    Err(VerifyError::NonConvergence {
        iterations: max_iter,
        residual: format!("{residual_norm:.3e}"),
    })
}

/// Rational LDL^T with per-entry rounding at the working precision; null
/// pivots (from repeated monomer rows) are skipped as in the double path.
fn ldlt_solve_rat(
    mut h: Vec<Vec<BigRational>>,
    b: &[BigRational],
    digits: u32,
) -> Vec<BigRational> {
    let m = b.len();
    let work = digits + 10;
    let threshold: Vec<BigRational> = (0..m)
        .map(|k| {
            let d0 = h[k][k].abs();
            d0 / BigRational::from(BigInt::from(10u8).pow(digits))
        })
        .collect();
    let mut d = vec![BigRational::zero(); m];
    let mut dead = vec![false; m];
    for k in 0..m {
        let mut pivot = h[k][k].clone();
        for j in 0..k {
            if !dead[j] {
                pivot -= round_sig(&(&h[k][j] * &h[k][j] * &d[j]), work);
            }
        }
        if pivot <= threshold[k] {
            dead[k] = true;
            continue;
        }
        d[k] = pivot.clone();
        for i in (k + 1)..m {
            let mut v = h[i][k].clone();
            for j in 0..k {
                if !dead[j] {
                    v -= round_sig(&(&h[i][j] * &h[k][j] * &d[j]), work);
                }
            }
            h[i][k] = round_sig(&(v / &pivot), work);
        }
    }
    let mut z = b.to_vec();
    for k in 0..m {
        if dead[k] {
            z[k] = BigRational::zero();
            continue;
        }
        for j in 0..k {
            if !dead[j] {
                let t = round_sig(&(&h[k][j] * &z[j]), work);
                z[k] -= t;
            }
        }
    }
    for k in 0..m {
        if !dead[k] {
            z[k] = round_sig(&(&z[k] / &d[k]), work);
        }
    }
    for k in (0..m).rev() {
        if dead[k] {
            continue;
        }
        for i in (k + 1)..m {
            if !dead[i] {
                let t = round_sig(&(&h[i][k] * &z[i]), work);
                z[k] -= t;
            }
        }
    }
    z
}

/// High-precision variant of [`numeric_equilibrium`]: rational arithmetic
/// rounded to `digits` significant decimals, for instances whose deepest
/// concentration is too small relative to the totals for doubles to carry.
pub fn numeric_equilibrium_hp(
    system: &System,
    monomer_conc: &[BigRational],
    digits: u32,
    tol: &BigRational,
    max_iter: usize,
) -> Result<Vec<BigRational>, VerifyError> {
    let m = system.monomer_count();
    let n = system.polymer_count();
    if monomer_conc.len() != m {
        return Err(VerifyError::DimensionMismatch);
    }
    if monomer_conc.iter().any(|x| !x.is_positive()) {
        return Err(VerifyError::NonPositiveInput("monomer totals".into()));
    }
    if !tol.is_positive() {
        return Err(VerifyError::NonPositiveInput("tolerance".into()));
    }
    let a = system.conservation();
    let work = digits + 10;
    let big = |v: i64| BigRational::from(BigInt::from(v));
    let concentrations = |lam: &[BigRational]| -> Option<Vec<BigRational>> {
        (0..n)
            .map(|j| {
                let t: BigRational =
                    (0..m).map(|i| big(a[i][j]) * &lam[i]).sum();
                exp_decimal(&round_sig(&t, work), work).ok()
            })
            .collect()
    };
    let phi = |lam: &[BigRational], x: &[BigRational]| -> BigRational {
        let linear: BigRational = lam
            .iter()
            .zip(monomer_conc)
            .map(|(l, x0)| round_sig(&(l * x0), work))
            .sum();
        linear - x.iter().sum::<BigRational>()
    };
    let scale = monomer_conc
        .iter()
        .cloned()
        .max()
        .expect("at least one monomer");
    let slack = BigRational::new(BigInt::one(), BigInt::from(10u8).pow(digits));
    let armijo = BigRational::new(BigInt::one(), BigInt::from(10_000));

    let mut lam = vec![BigRational::zero(); m];
    let mut x = concentrations(&lam).expect("exp(0) is representable");
    let mut value = phi(&lam, &x);
    let mut residual_norm = BigRational::zero();
    for _ in 0..max_iter {
        let grad: Vec<BigRational> = (0..m)
            .map(|i| {
                let ax: BigRational = (0..n).map(|j| big(a[i][j]) * &x[j]).sum();
                round_sig(&(&monomer_conc[i] - ax), work)
            })
            .collect();
        residual_norm = grad
            .iter()
            .map(|g| g.abs())
            .max()
            .expect("at least one monomer");
        if residual_norm <= tol * &scale {
            return Ok(x);
        }
        let h: Vec<Vec<BigRational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| {
                        let s: BigRational =
                            (0..n).map(|j| big(a[i][j] * a[k][j]) * &x[j]).sum();
                        round_sig(&s, work)
                    })
                    .collect()
            })
            .collect();
        let mut step = ldlt_solve_rat(h, &grad, digits);
        let mut ascent: BigRational =
            grad.iter().zip(&step).map(|(g, s)| g * s).sum();
        if !ascent.is_positive() {
            step = grad.clone();
            ascent = grad.iter().map(|g| g * g).sum();
        }
        let mut t = BigRational::one();
        let t_floor = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(19));
        loop {
            let cand: Vec<BigRational> = lam
                .iter()
                .zip(&step)
                .map(|(l, s)| round_sig(&(l + &t * s), work))
                .collect();
            let improvement = &armijo * &t * &ascent;
            if let Some(cand_x) = concentrations(&cand) {
                let cand_value = phi(&cand, &cand_x);
                if cand_value >= &value + improvement {
                    assert!(
                        cand_value >= &value - &slack,
                        "dual objective must not decrease beyond rounding"
                    );
                    lam = cand;
                    x = cand_x;
                    value = cand_value;
                    break;
                }
            }
            t /= big(2);
            if t < t_floor {
                return Err(VerifyError::NonConvergence {
                    iterations: max_iter,
                    residual: render_ratio(&residual_norm),
                });
            }
        }
    }
    Err(VerifyError::NonConvergence {
        iterations: max_iter,
        residual: render_ratio(&residual_norm),
    })
}

const ENUM_BUDGET: usize = 50_000_000;

/// Every net canonical reaction whose reactant copies total at most
/// `max_reactants`: reactant multisets over the on-target set, product
/// decompositions of their monomer pool over all polymers (depth-first,
/// with memoized feasibility pruning), duplicates and the zero net removed.
pub fn enumerate_canonical(
    system: &System,
    spec: &OnTargetSpec,
    max_reactants: u64,
) -> Result<Vec<ReactionVec>, VerifyError> {
    let n = system.polymer_count();
    let monomers = system.monomer_count();
    let members: Vec<usize> = spec.members().collect();
    // Polymer composition as monomer-count vectors.
    let composition: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let mut row = vec![0u64; monomers];
            for (m, c) in system.polymer(j).counts().iter() {
                let idx = system
                    .monomer_index(m.as_str())
                    .expect("validated system");
                row[idx] = c;
            }
            row
        })
        .collect();

    struct Search<'a> {
        composition: &'a [Vec<u64>],
        n: usize,
        budget: usize,
        steps: usize,
        feasible_memo: HashMap<(usize, Vec<u64>), bool>,
        nets: BTreeSet<Vec<i64>>,
    }

    impl Search<'_> {
        fn tick(&mut self) -> Result<(), VerifyError> {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(VerifyError::BudgetExceeded(self.steps));
            }
            Ok(())
        }

        fn max_count(&self, j: usize, pool: &[u64]) -> u64 {
            self.composition[j]
                .iter()
                .zip(pool)
                .filter(|(c, _)| **c > 0)
                .map(|(c, p)| p / c)
                .min()
                .unwrap_or(0)
        }

        fn feasible(&mut self, j: usize, pool: &[u64]) -> Result<bool, VerifyError> {
            self.tick()?;
            if pool.iter().all(|&p| p == 0) {
                return Ok(true);
            }
            if j == self.n {
                return Ok(false);
            }
            let key = (j, pool.to_vec());
            if let Some(&v) = self.feasible_memo.get(&key) {
                return Ok(v);
            }
            let mut ok = false;
            let cap = self.max_count(j, pool);
            let mut reduced = pool.to_vec();
            for c in 0..=cap {
                if c > 0 {
                    for (r, comp) in reduced.iter_mut().zip(&self.composition[j]) {
                        *r -= comp;
                    }
                }
                if self.feasible(j + 1, &reduced)? {
                    ok = true;
                    break;
                }
            }
            self.feasible_memo.insert(key, ok);
            Ok(ok)
        }

        fn products(
            &mut self,
            j: usize,
            pool: &mut Vec<u64>,
            chosen: &mut Vec<i64>,
            reactants: &[i64],
        ) -> Result<(), VerifyError> {
            self.tick()?;
            if pool.iter().all(|&p| p == 0) {
                let net: Vec<i64> = reactants
                    .iter()
                    .zip(chosen.iter())
                    .map(|(r, c)| r - c)
                    .collect();
                if net.iter().any(|&x| x != 0) {
                    self.nets.insert(net);
                }
                return Ok(());
            }
            if j == self.n || !self.feasible(j, pool)? {
                return Ok(());
            }
            let cap = self.max_count(j, pool);
            for c in 0..=cap {
                if c > 0 {
                    for (p, comp) in pool.iter_mut().zip(&self.composition[j]) {
                        *p -= comp;
                    }
                    chosen[j] += 1;
                }
                self.products(j + 1, pool, chosen, reactants)?;
            }
            chosen[j] -= cap as i64;
            for (p, comp) in pool.iter_mut().zip(&self.composition[j]) {
                *p += comp * cap;
            }
            Ok(())
        }

        fn reactants(
            &mut self,
            members: &[usize],
            idx: usize,
            remaining: u64,
            pool: &mut Vec<u64>,
            counts: &mut Vec<i64>,
        ) -> Result<(), VerifyError> {
            self.tick()?;
            if counts.iter().any(|&c| c > 0) {
                let reactants = counts.clone();
                let mut chosen = vec![0i64; self.n];
                let mut work = pool.clone();
                self.products(0, &mut work, &mut chosen, &reactants)?;
            }
            if remaining == 0 {
                return Ok(());
            }
            for (pos, &j) in members.iter().enumerate().skip(idx) {
                counts[j] += 1;
                for (p, comp) in pool.iter_mut().zip(&self.composition[j]) {
                    *p += comp;
                }
                self.reactants(members, pos, remaining - 1, pool, counts)?;
                counts[j] -= 1;
                for (p, comp) in pool.iter_mut().zip(&self.composition[j]) {
                    *p -= comp;
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        composition: &composition,
        n,
        budget: ENUM_BUDGET,
        steps: 0,
        feasible_memo: HashMap::new(),
        nets: BTreeSet::new(),
    };
    let mut pool = vec![0u64; monomers];
    let mut counts = vec![0i64; n];
    search.reactants(&members, 0, max_reactants, &mut pool, &mut counts)?;

    Ok(search
        .nets
        .into_iter()
        .map(|net| {
            ReactionVec::from_net(system.conservation(), net)
                .expect("reactants and products share a monomer pool")
        })
        .collect())
}
