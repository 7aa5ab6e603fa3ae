//! Per-polymer exponent bounds and the closed-system entropy bound.
//!
//! The target quantity for an off-target polymer `P` is the infimum ratio
//! `k_i/l_i` over canonical reactions producing `P` — a lower bound on its
//! equilibrium exponent.  The infimum ranges over infinitely many reactions
//! and need not be attained, so three methods with explicit certification
//! are provided:
//!
//! * `basis_estimate` — minimum over producing generators only.  Fast, but
//!   a combination with a cheap non-producing component can undercut every
//!   single producer, so the value is *not* certified as a bound.
//! * `lp_certified` — exact-rational linear program over the continuous
//!   cone, novelty normalized to 1 and the `P`-entry bounded away from zero
//!   (`v[P] <= -1/1000`; the ratio is homogeneous, so the normalization is
//!   lossless and the constant arbitrary).  The optimum is a certified
//!   lower bound for every producing reaction in which `P` accounts for at
//!   least 1/1000 of the novelty.
//! * `enum_exact` — exact minimum over nonnegative integer generator
//!   combinations of bounded total size.  Certified only when it meets the
//!   LP value (the two then pinch the infimum); otherwise it is an upper
//!   estimate and honestly flagged as such.
//!
//! For closed systems with unit on-target exponents the entropy loss
//! `e(v) = sum of the net vector` satisfies `k = e + l`, which turns the
//! first-round minimum into `min e/l + 1` — the closed-system bound
//! computed by [`tbn_bound`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::levelize::{imbalance_novelty, LevelAssignment, PartialAssignment};
use crate::model::{OnTargetSpec, ReactionVec, System};
use crate::ratio::{rat, render_ratio};
use crate::simplex::{solve, LpOutcome, StandardLp};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("no generator produces polymer {0}; it is not producible from the on-target set")]
    NoProducingReaction(String),
    #[error("polymer {0} is already assigned before the requested round")]
    AlreadyAssigned(String),
    #[error("bound rounds are numbered from 1")]
    LevelOutOfRange,
    #[error("reactant {0} has no assigned exponent")]
    UnassignedReactant(String),
    #[error("reaction makes {0} unassigned product copies; the shortcut needs exactly 1")]
    NotNonInteracting(u64),
    #[error("bound linear program failed: {0}")]
    LpFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    BasisEstimate,
    LpCertified,
    EnumExact,
}

impl std::fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundMethod::BasisEstimate => "basis_estimate",
            BoundMethod::LpCertified => "lp_certified",
            BoundMethod::EnumExact => "enum_exact",
        })
    }
}

impl std::str::FromStr for BoundMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basis_estimate" | "basis" => Ok(BoundMethod::BasisEstimate),
            "lp_certified" | "lp" => Ok(BoundMethod::LpCertified),
            "enum_exact" | "enum" => Ok(BoundMethod::EnumExact),
            other => Err(format!("unknown bound method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub polymer: String,
    pub level: usize,
    pub method: BoundMethod,
    pub value: BigRational,
    /// Whether `value` is a certified lower bound on the polymer's exponent.
    pub certified: bool,
    /// A reaction attaining the value, where one exists.
    pub witness: Option<String>,
}

impl BoundReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "polymer": self.polymer,
            "level": self.level,
            "method": self.method.to_string(),
            "value": render_ratio(&self.value),
            "certified": self.certified,
            "witness": self.witness,
        })
    }
}

/// Computes a bound for `polymer` in round `level` (>= 1), against the
/// assignment state just before that round.
#[allow(clippy::too_many_arguments)]
pub fn per_polymer_bound(
    system: &System,
    spec: &OnTargetSpec,
    assignment: &LevelAssignment,
    basis: &[ReactionVec],
    polymer: usize,
    level: usize,
    method: BoundMethod,
    max_combination: u64,
) -> Result<BoundReport, BoundError> {
    if level == 0 {
        return Err(BoundError::LevelOutOfRange);
    }
    let partial = assignment.prefix(spec, level);
    let name = system.polymer_name(polymer).to_string();
    if partial.assigned(polymer) {
        return Err(BoundError::AlreadyAssigned(name));
    }
    let producers: Vec<&ReactionVec> =
        basis.iter().filter(|h| h.entry(polymer) < 0).collect();
    if producers.is_empty() {
        return Err(BoundError::NoProducingReaction(name));
    }

    match method {
        BoundMethod::BasisEstimate => {
            let mut best: Option<(BigRational, &ReactionVec)> = None;
            for h in &producers {
                let (k, l) = imbalance_novelty(h, &partial);
                debug_assert!(l > 0, "producing an unassigned polymer implies novelty");
                let ratio = k / BigRational::from(BigInt::from(l));
                if best.as_ref().map_or(true, |(b, _)| ratio < *b) {
                    best = Some((ratio, h));
                }
            }
            let (value, witness) = best.expect("nonempty producer set");
            Ok(BoundReport {
                polymer: name,
                level,
                method,
                value,
                certified: false,
                witness: Some(witness.render(system)),
            })
        }
        BoundMethod::LpCertified => {
            let value = lp_bound(system, spec, &partial, polymer)?;
            Ok(BoundReport {
                polymer: name,
                level,
                method,
                value,
                certified: true,
                witness: None,
            })
        }
        BoundMethod::EnumExact => {
            let (value, witness) =
                enum_bound(system, basis, &partial, polymer, max_combination);
            let lp = lp_bound(system, spec, &partial, polymer)?;
            debug_assert!(lp <= value, "a relaxation cannot exceed the integer minimum");
            Ok(BoundReport {
                polymer: name,
                level,
                method,
                certified: value == lp,
                value,
                witness: Some(witness.render(system)),
            })
        }
    }
}

/// The certified relaxation: minimize the assigned-weight surplus over the
/// continuous cone with novelty 1 and `v[target] <= -1/1000`.
fn lp_bound(
    system: &System,
    spec: &OnTargetSpec,
    partial: &PartialAssignment,
    target: usize,
) -> Result<BigRational, BoundError> {
    let dim = system.polymer_count();
    let a = system.conservation();
    // Columns: p_j, q_j for on-target j (free entry), u_j otherwise
    // (nonpositive entry), then the slack of the target constraint.
    #[derive(Clone, Copy)]
    enum Col {
        P(usize),
        Q(usize),
        U(usize),
        Slack,
    }
    let mut cols: Vec<Col> = Vec::new();
    for j in 0..dim {
        if spec.contains(j) {
            cols.push(Col::P(j));
            cols.push(Col::Q(j));
        } else {
            cols.push(Col::U(j));
        }
    }
    cols.push(Col::Slack);

    let zero = BigRational::zero();
    let objective: Vec<BigRational> = cols
        .iter()
        .map(|c| match *c {
            Col::P(j) => partial.mu(j).cloned().unwrap_or_else(|| zero.clone()),
            Col::Q(j) => -partial.mu(j).cloned().unwrap_or_else(|| zero.clone()),
            Col::U(j) => -partial.mu(j).cloned().unwrap_or_else(|| zero.clone()),
            Col::Slack => zero.clone(),
        })
        .collect();

    let mut constraints: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for row in a {
        constraints.push(
            cols.iter()
                .map(|c| match *c {
                    Col::P(j) => rat(row[j], 1),
                    Col::Q(j) | Col::U(j) => rat(-row[j], 1),
                    Col::Slack => zero.clone(),
                })
                .collect(),
        );
        rhs.push(zero.clone());
    }
    constraints.push(
        cols.iter()
            .map(|c| match *c {
                Col::U(j) if !partial.assigned(j) => BigRational::one(),
                _ => zero.clone(),
            })
            .collect(),
    );
    rhs.push(BigRational::one());
    constraints.push(
        cols.iter()
            .map(|c| match *c {
                Col::U(j) if j == target => BigRational::one(),
                Col::Slack => -BigRational::one(),
                _ => zero.clone(),
            })
            .collect(),
    );
    rhs.push(rat(1, 1000));

    match solve(&StandardLp { objective, constraints, rhs })
        .map_err(|e| BoundError::LpFailed(e.to_string()))?
    {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible => Err(BoundError::LpFailed(
            "no cone point gives the target a 1/1000 novelty share".into(),
        )),
        LpOutcome::Unbounded => Err(BoundError::LpFailed(
            "relaxation unbounded; the on-target set does not validate".into(),
        )),
    }
}

/// Exact minimum ratio over generator combinations of total size at most
/// `max_combination` that net-produce the target.  Novelty and surplus are
/// additive over cone members, so the search runs on scalar summaries.
fn enum_bound(
    system: &System,
    basis: &[ReactionVec],
    partial: &PartialAssignment,
    target: usize,
    max_combination: u64,
) -> (BigRational, ReactionVec) {
    struct Summary {
        k: BigRational,
        l: u64,
        target_entry: i64,
    }
    let summaries: Vec<Summary> = basis
        .iter()
        .map(|h| {
            let (k, l) = imbalance_novelty(h, partial);
            Summary { k, l, target_entry: h.entry(target) }
        })
        .collect();

    struct Best {
        ratio: BigRational,
        coeffs: Vec<u64>,
    }
    fn explore(
        summaries: &[Summary],
        idx: usize,
        remaining: u64,
        k: &BigRational,
        l: u64,
        target: i64,
        coeffs: &mut Vec<u64>,
        best: &mut Option<Best>,
    ) {
        if target < 0 && l > 0 {
            let ratio = k / BigRational::from(BigInt::from(l));
            if best.as_ref().map_or(true, |b| ratio < b.ratio) {
                *best = Some(Best { ratio, coeffs: coeffs.clone() });
            }
        }
        if idx == summaries.len() || remaining == 0 {
            return;
        }
        let s = &summaries[idx];
        for c in 0..=remaining {
            if c > 0 {
                coeffs[idx] = c;
            }
            let k2 = k + &s.k * BigRational::from(BigInt::from(c));
            explore(
                summaries,
                idx + 1,
                remaining - c,
                &k2,
                l + s.l * c,
                target + s.target_entry * c as i64,
                coeffs,
                best,
            );
            coeffs[idx] = 0;
        }
    }

    let mut best: Option<Best> = None;
    let mut coeffs = vec![0u64; basis.len()];
    explore(
        &summaries,
        0,
        max_combination,
        &BigRational::zero(),
        0,
        0,
        &mut coeffs,
        &mut best,
    );
    let best = best.expect("a single producing generator is a size-1 combination");
    let mut net = vec![0i64; system.polymer_count()];
    for (i, &c) in best.coeffs.iter().enumerate() {
        for (j, n) in net.iter_mut().enumerate() {
            *n += basis[i].entry(j) * c as i64;
        }
    }
    let witness = ReactionVec::from_net(system.conservation(), net)
        .expect("combinations of conserved vectors are conserved");
    (best.ratio, witness)
}

/// Non-interacting shortcut: when a reaction has exactly one unassigned
/// product copy and fully assigned reactants, that product's exponent is
/// the reaction's assigned-weight surplus.
pub fn shortcut_assign(
    system: &System,
    alpha: &ReactionVec,
    partial: &PartialAssignment,
) -> Result<BigRational, BoundError> {
    for (j, &e) in alpha.net().iter().enumerate() {
        if e > 0 && !partial.assigned(j) {
            return Err(BoundError::UnassignedReactant(
                system.polymer_name(j).to_string(),
            ));
        }
    }
    let (k, l) = imbalance_novelty(alpha, partial);
    if l != 1 {
        return Err(BoundError::NotNonInteracting(l));
    }
    Ok(k)
}

/// Report for the closed-system checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TbnReport {
    pub closed: bool,
    /// Minimum entropy loss over off-target-producing generators.
    pub min_entropy_loss: Option<i64>,
    /// Minimum entropy loss per unit novelty.
    pub worst_ratio: Option<BigRational>,
    /// Uniform first-round bound: `worst_ratio + 1`.
    pub mu1: Option<BigRational>,
    pub witness: Option<ReactionVec>,
}

impl TbnReport {
    pub fn to_json(&self, system: &System) -> serde_json::Value {
        json!({
            "closed": self.closed,
            "min_entropy_loss": self.min_entropy_loss,
            "worst_ratio": self.worst_ratio.as_ref().map(render_ratio),
            "mu1": self.mu1.as_ref().map(render_ratio),
            "witness": self.witness.as_ref().map(|v| v.render(system)),
        })
    }
}

/// A system is closed for the on-target set when no generator creates
/// polymers (`e >= 0`) and every generator making an off-target product
/// loses at least one polymer (`e >= 1`).  Entropy loss is additive, so
/// both clauses lift to all canonical reactions.
pub fn check_tbn_closed(
    spec: &OnTargetSpec,
    basis: &[ReactionVec],
) -> TbnReport {
    let mut min_e: Option<i64> = None;
    let mut witness: Option<ReactionVec> = None;
    for h in basis {
        let e = h.entropy_loss();
        let makes_off_target = h
            .net()
            .iter()
            .enumerate()
            .any(|(j, &x)| x < 0 && !spec.contains(j));
        if e < 0 || (makes_off_target && e < 1) {
            return TbnReport {
                closed: false,
                min_entropy_loss: Some(e),
                worst_ratio: None,
                mu1: None,
                witness: Some(h.clone()),
            };
        }
        if makes_off_target && min_e.map_or(true, |m| e < m) {
            min_e = Some(e);
            witness = Some(h.clone());
        }
    }
    TbnReport { closed: true, min_entropy_loss: min_e, worst_ratio: None, mu1: None, witness }
}

/// The closed-system exponent bound: every off-target polymer's exponent is
/// at least `min e/l + 1` over generators with novelty, assuming unit
/// on-target exponents.
pub fn tbn_bound(spec: &OnTargetSpec, basis: &[ReactionVec]) -> TbnReport {
    let report = check_tbn_closed(spec, basis);
    if !report.closed {
        return report;
    }
    let partial = PartialAssignment::from_spec(spec);
    let mut worst: Option<(BigRational, ReactionVec)> = None;
    for h in basis {
        let (_, l) = imbalance_novelty(h, &partial);
        if l == 0 {
            continue;
        }
        let ratio = rat(h.entropy_loss(), 1) / BigRational::from(BigInt::from(l));
        if worst.as_ref().map_or(true, |(w, _)| ratio < *w) {
            worst = Some((ratio, h.clone()));
        }
    }
    match worst {
        Some((ratio, witness)) => TbnReport {
            closed: true,
            min_entropy_loss: report.min_entropy_loss,
            mu1: Some(&ratio + BigRational::one()),
            worst_ratio: Some(ratio),
            witness: Some(witness),
        },
        None => report,
    }
}
