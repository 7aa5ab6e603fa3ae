//! The canonical-reaction cone and its generating set.
//!
//! For an on-target set `S`, the canonical reactions of a system are exactly
//! the integer points of the cone
//!
//! ```text
//! C^S = { v : A v = 0,  v[P] <= 0 for every P outside S }
//! ```
//!
//! (positive entries consume, so reactants must lie in `S`).  Every integer
//! point of `C^S` is a nonnegative integer combination of a finite generating
//! set — the Hilbert basis — and the level sweep, stability check, and bound
//! computations all take minima over that finite set.
//!
//! The basis is computed by a completion procedure over a *pointed*
//! reformulation: each unrestricted coordinate (`P` in `S`) is split as
//! `v_P = p_P - q_P` with `p_P, q_P >= 0`, each sign-constrained coordinate
//! keeps a single `q_P >= 0` with `v_P = -q_P`.  Minimal solutions of the
//! resulting homogeneous system over nonnegative integers are found by
//! breadth-first completion from the unit vectors, extending a candidate `t`
//! along coordinate `k` only when `<C t, C e_k> < 0` and pruning candidates
//! dominated by an already-found minimal solution.  Projecting minimal
//! solutions back to `v`-space (dropping zeros, e.g. from split catalyst
//! pairs, and duplicates) yields a generating set: generation survives the
//! projection because lifting and projection are linear.
//!
//! The completion is exhaustive-search-shaped, so it carries explicit
//! resource budgets and fails loudly when they are exceeded.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::model::{OnTargetSpec, ReactionVec, System};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HilbertError {
    #[error("completion exceeded the intermediate-vector budget ({0} vectors)")]
    BudgetExceeded(usize),
    #[error("completion exceeded the coordinate-norm budget (l1 norm {0})")]
    NormExceeded(u64),
}

/// Resource budgets for the completion.  `EQC_BASIS_BUDGET` overrides
/// `max_vectors` in the command-line tool.
#[derive(Debug, Clone)]
pub struct HilbertConfig {
    /// Cap on the total number of candidate vectors ever enqueued.
    pub max_vectors: usize,
    /// Cap on the l1 norm of any candidate.
    pub max_norm: u64,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        HilbertConfig { max_vectors: 200_000, max_norm: 1_000_000 }
    }
}

/// The cone `C^S` in polymer coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSpec {
    equalities: Vec<Vec<i64>>,
    sign_constraints: BTreeSet<usize>,
    dim: usize,
}

impl ConeSpec {
    pub fn equalities(&self) -> &[Vec<i64>] {
        &self.equalities
    }

    pub fn sign_constraints(&self) -> &BTreeSet<usize> {
        &self.sign_constraints
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Membership test for an integer vector (equalities hold by
    /// `ReactionVec` construction; this additionally checks the signs).
    pub fn contains(&self, v: &ReactionVec) -> bool {
        v.len() == self.dim && self.sign_constraints.iter().all(|&j| v.entry(j) <= 0)
    }
}

/// Builds the cone for a system and on-target set: equalities are the
/// conservation matrix, sign constraints cover every polymer outside `S`.
pub fn build_cone(system: &System, spec: &OnTargetSpec) -> ConeSpec {
    let sign_constraints = (0..system.polymer_count())
        .filter(|&j| !spec.contains(j))
        .collect();
    ConeSpec {
        equalities: system.conservation().to_vec(),
        sign_constraints,
        dim: system.polymer_count(),
    }
}

/// Internal: the pointed reformulation retained for decomposition queries.
#[derive(Debug, Clone)]
struct SplitContext {
    /// Split column `k` maps to polymer `columns[k].0` with sign
    /// `columns[k].1` (`+1` for a `p` variable, `-1` for a `q` variable).
    columns: Vec<(usize, i64)>,
    /// Minimal solutions of the split system, including catalyst pairs.
    minimal: Vec<Vec<u64>>,
    /// Index into the projected vector list (`None` for zero projections).
    proj: Vec<Option<usize>>,
}

/// A generating set for the integer points of a cone, canonically ordered
/// (lexicographic on the net vectors), deduplicated, zero-free.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    vectors: Vec<ReactionVec>,
    split: SplitContext,
}

impl GeneratingSet {
    pub fn vectors(&self) -> &[ReactionVec] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReactionVec> {
        self.vectors.iter()
    }

    /// Generators producing polymer `j` (negative entry at `j`).
    pub fn producing(&self, j: usize) -> Vec<&ReactionVec> {
        self.vectors.iter().filter(|h| h.entry(j) < 0).collect()
    }

    /// Expresses an integer cone point as a nonnegative integer combination
    /// of the generating set, by complete bounded search in the pointed
    /// reformulation.  Returns `(vector index, coefficient)` pairs, or `None`
    /// when the target is not in the cone (or not decomposable, which would
    /// falsify completeness of the basis).
    pub fn decompose(&self, target: &ReactionVec) -> Option<Vec<(usize, u64)>> {
        let mut rem: Vec<u64> = Vec::with_capacity(self.split.columns.len());
        for &(j, sign) in &self.split.columns {
            let x = target.entry(j);
            let c = if sign > 0 { x.max(0) } else { (-x).max(0) };
            // A q-only column with positive net entry means the target sits
            // outside the cone.
            if sign < 0 && x > 0 && !self.split.columns.iter().any(|&(i, s)| i == j && s > 0) {
                return None;
            }
            rem.push(c as u64);
        }
        let mut coeffs = vec![0u64; self.split.minimal.len()];
        let mut dead: HashSet<(usize, Vec<u64>)> = HashSet::new();
        if !Self::search(&self.split.minimal, 0, &mut rem, &mut coeffs, &mut dead) {
            return None;
        }
        let mut out: HashMap<usize, u64> = HashMap::new();
        for (i, &c) in coeffs.iter().enumerate() {
            if c > 0 {
                if let Some(v) = self.split.proj[i] {
                    *out.entry(v).or_insert(0) += c;
                }
            }
        }
        let mut out: Vec<(usize, u64)> = out.into_iter().collect();
        out.sort_unstable();
        Some(out)
    }

    fn search(
        minimal: &[Vec<u64>],
        idx: usize,
        rem: &mut Vec<u64>,
        coeffs: &mut Vec<u64>,
        dead: &mut HashSet<(usize, Vec<u64>)>,
    ) -> bool {
        if rem.iter().all(|&x| x == 0) {
            return true;
        }
        if idx == minimal.len() {
            return false;
        }
        if dead.contains(&(idx, rem.clone())) {
            return false;
        }
        let m = &minimal[idx];
        let cap = m
            .iter()
            .zip(rem.iter())
            .filter(|(mk, _)| **mk > 0)
            .map(|(mk, rk)| rk / mk)
            .min()
            .unwrap_or(0);
        for c in (0..=cap).rev() {
            for (k, mk) in m.iter().enumerate() {
                rem[k] -= mk * c;
            }
            coeffs[idx] = c;
            if Self::search(minimal, idx + 1, rem, coeffs, dead) {
                return true;
            }
            coeffs[idx] = 0;
            for (k, mk) in m.iter().enumerate() {
                rem[k] += mk * c;
            }
        }
        dead.insert((idx, rem.clone()));
        false
    }

    /// One line per generator: rendered reaction plus the raw net vector.
    pub fn render_dump(&self, system: &System) -> String {
        let mut out = String::new();
        for v in &self.vectors {
            out.push_str(&format!("{}  {:?}\n", v.render(system), v.net()));
        }
        out
    }
}

/// Computes the Hilbert basis of the cone's integer points.
pub fn hilbert_basis(cone: &ConeSpec, config: &HilbertConfig) -> Result<GeneratingSet, HilbertError> {
    // Split columns: p and q for unconstrained coordinates, q only for
    // sign-constrained ones.
    let mut columns: Vec<(usize, i64)> = Vec::new();
    for j in 0..cone.dim {
        if !cone.sign_constraints.contains(&j) {
            columns.push((j, 1));
        }
        columns.push((j, -1));
    }
    let m_rows = cone.equalities.len();
    let col_vecs: Vec<Vec<i64>> = columns
        .iter()
        .map(|&(j, sign)| cone.equalities.iter().map(|row| sign * row[j]).collect())
        .collect();

    let residual = |t: &[u64]| -> Vec<i64> {
        let mut r = vec![0i64; m_rows];
        for (k, &c) in t.iter().enumerate() {
            if c > 0 {
                for (ri, &cv) in r.iter_mut().zip(&col_vecs[k]) {
                    *ri += cv * c as i64;
                }
            }
        }
        r
    };

    let mut minimal: Vec<Vec<u64>> = Vec::new();
    let mut frontier: Vec<Vec<u64>> = (0..columns.len())
        .map(|k| {
            let mut e = vec![0u64; columns.len()];
            e[k] = 1;
            e
        })
        .collect();
    let mut generated = frontier.len();

    while !frontier.is_empty() {
        frontier.sort_unstable();
        frontier.dedup();
        let mut next: HashSet<Vec<u64>> = HashSet::new();
        for t in &frontier {
            let dominated = minimal.iter().any(|b| b.iter().zip(t.iter()).all(|(bi, ti)| bi <= ti));
            if dominated {
                continue;
            }
            let r = residual(t);
            if r.iter().all(|&x| x == 0) {
                minimal.push(t.clone());
                continue;
            }
            for (k, col) in col_vecs.iter().enumerate() {
                let dot: i64 = r.iter().zip(col).map(|(&ri, &ci)| ri * ci).sum();
                if dot >= 0 {
                    continue;
                }
                let mut u = t.clone();
                u[k] += 1;
                let norm: u64 = u.iter().sum();
                if norm > config.max_norm {
                    return Err(HilbertError::NormExceeded(norm));
                }
                if minimal.iter().any(|b| b.iter().zip(u.iter()).all(|(bi, ui)| bi <= ui)) {
                    continue;
                }
                if next.insert(u) {
                    generated += 1;
                    if generated > config.max_vectors {
                        return Err(HilbertError::BudgetExceeded(generated));
                    }
                }
            }
        }
        frontier = next.into_iter().collect();
    }

    minimal.sort_unstable();

    // Project to net vectors, dropping zeros and duplicates.
    let project = |m: &[u64]| -> Vec<i64> {
        let mut net = vec![0i64; cone.dim];
        for (k, &c) in m.iter().enumerate() {
            let (j, sign) = columns[k];
            net[j] += sign * c as i64;
        }
        net
    };
    let mut nets: BTreeSet<Vec<i64>> = BTreeSet::new();
    for m in &minimal {
        let net = project(m);
        if net.iter().any(|&x| x != 0) {
            nets.insert(net);
        }
    }
    let vectors: Vec<ReactionVec> = nets
        .into_iter()
        .map(|net| {
            ReactionVec::from_net(&cone.equalities, net)
                .expect("completion solutions satisfy the equalities")
        })
        .collect();
    let proj = minimal
        .iter()
        .map(|m| {
            let net = project(m);
            if net.iter().all(|&x| x == 0) {
                None
            } else {
                Some(
                    vectors
                        .iter()
                        .position(|v| v.net() == net.as_slice())
                        .expect("projected vector present"),
                )
            }
        })
        .collect();

    debug_assert!(vectors.iter().all(|v| {
        cone.sign_constraints.iter().all(|&j| v.entry(j) <= 0)
    }));

    Ok(GeneratingSet { vectors, split: SplitContext { columns, minimal, proj } })
}
