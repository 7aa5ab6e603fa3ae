//! The level sweep: extending an on-target exponent assignment to every
//! off-target polymer.
//!
//! Given exponents `mu` on the on-target set (concentration `c^mu` at base
//! `c`), every off-target polymer acquires a forced equilibrium exponent.
//! The sweep computes it by rounds.  For a generating vector `v` and a
//! partial assignment, split the entries into an assigned part and an
//! unassigned part:
//!
//! * imbalance `k(v)` — the assigned-weight surplus,
//!   `sum over assigned P of v[P] * mu(P)`;
//! * novelty `l(v)` — how many unassigned product copies `v` makes,
//!   `sum over unassigned P of max(-v[P], 0)`.
//!
//! Each round takes the minimum ratio `k/l` over generators with `l > 0`;
//! the minimizers' unassigned products all receive that ratio as their
//! exponent, and the round repeats until every polymer is assigned.  Round
//! ratios are strictly increasing, and every minimizing generator becomes
//! exactly balanced once its products are assigned; both facts are asserted.
//!
//! The first-round minimum also drives the stability check: the assignment
//! extends an equilibrium with all off-target exponents above every
//! on-target one exactly when the first ratio exceeds 1.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::model::{OnTargetSpec, ReactionVec, System};
use crate::ratio::{decimal_string, pow_decimal, render_ratio};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LevelizeError {
    #[error("polymers are not producible from the on-target set: {0:?}")]
    NotProducible(Vec<String>),
    #[error("concentration base must lie strictly between 0 and 1, got {0}")]
    BaseOutOfRange(String),
    #[error(transparent)]
    Power(#[from] crate::ratio::RatioError),
}

/// A partial exponent assignment: on-target polymers start assigned, levels
/// extend it.
#[derive(Debug, Clone)]
pub struct PartialAssignment {
    mu: BTreeMap<usize, BigRational>,
}

impl PartialAssignment {
    pub fn from_spec(spec: &OnTargetSpec) -> Self {
        PartialAssignment { mu: spec.iter().map(|(j, m)| (j, m.clone())).collect() }
    }

    pub fn assigned(&self, j: usize) -> bool {
        self.mu.contains_key(&j)
    }

    pub fn mu(&self, j: usize) -> Option<&BigRational> {
        self.mu.get(&j)
    }

    pub fn assign(&mut self, j: usize, mu: BigRational) {
        self.mu.insert(j, mu);
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

/// Imbalance and novelty of a vector against a partial assignment.
/// Reactants of canonical vectors are always assigned; the sum runs over
/// whatever is assigned, so catalytic assigned products also count.
pub fn imbalance_novelty(v: &ReactionVec, partial: &PartialAssignment) -> (BigRational, u64) {
    let mut k = BigRational::zero();
    let mut l: u64 = 0;
    for (j, &e) in v.net().iter().enumerate() {
        if let Some(mu) = partial.mu(j) {
            k += BigRational::from(BigInt::from(e)) * mu;
        } else if e < 0 {
            l += (-e) as u64;
        } else {
            debug_assert!(e == 0, "unassigned reactant in a canonical vector");
        }
    }
    (k, l)
}

/// One round of the sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub index: usize,
    pub mu: BigRational,
    /// Polymers assigned in this round, ascending.
    pub members: Vec<usize>,
    /// Ratio-minimizing generators, in generating-set order.
    pub reactions: Vec<ReactionVec>,
}

/// The completed assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAssignment {
    dim: usize,
    levels: Vec<Level>,
    all_mu: BTreeMap<usize, BigRational>,
}

impl LevelAssignment {
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// The exponent of polymer `j` in the extended assignment.
    pub fn mu_tilde(&self, j: usize) -> Option<&BigRational> {
        self.all_mu.get(&j)
    }

    /// All exponents, on-target values included.
    pub fn extended_mu(&self) -> &BTreeMap<usize, BigRational> {
        &self.all_mu
    }

    /// The full exponent vector in polymer order.
    pub fn mu_vector(&self) -> Vec<BigRational> {
        (0..self.dim)
            .map(|j| self.all_mu[&j].clone())
            .collect()
    }

    /// The first-round ratio, if any off-target polymer exists.
    pub fn mu1(&self) -> Option<&BigRational> {
        self.levels.first().map(|l| &l.mu)
    }

    /// The partial assignment just before round `i`: the on-target
    /// exponents plus every round with index below `i`.
    pub fn prefix(&self, spec: &OnTargetSpec, i: usize) -> PartialAssignment {
        let mut partial = PartialAssignment::from_spec(spec);
        for level in self.levels.iter().filter(|l| l.index < i) {
            for &j in &level.members {
                partial.assign(j, level.mu.clone());
            }
        }
        partial
    }

    pub fn to_json(&self, system: &System) -> serde_json::Value {
        let levels: Vec<_> = self
            .levels
            .iter()
            .map(|l| {
                json!({
                    "i": l.index,
                    "mu": render_ratio(&l.mu),
                    "members": l.members.iter().map(|&j| system.polymer_name(j)).collect::<Vec<_>>(),
                    "reactions": l.reactions.iter().map(|v| v.render(system)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mu: BTreeMap<&str, String> = self
            .all_mu
            .iter()
            .map(|(&j, m)| (system.polymer_name(j), render_ratio(m)))
            .collect();
        json!({ "levels": levels, "extended_mu": mu })
    }
}

/// Runs the sweep over a generating set of the canonical cone.
pub fn levelize(
    system: &System,
    spec: &OnTargetSpec,
    basis: &[ReactionVec],
) -> Result<LevelAssignment, LevelizeError> {
    let dim = system.polymer_count();
    let mut partial = PartialAssignment::from_spec(spec);
    let mut levels: Vec<Level> = Vec::new();

    for index in 1.. {
        let scored: Vec<(usize, BigRational, u64)> = basis
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                let (k, l) = imbalance_novelty(v, &partial);
                (l > 0).then(|| (i, k, l))
            })
            .collect();
        if scored.is_empty() {
            break;
        }
        let mu = scored
            .iter()
            .map(|(_, k, l)| k / BigRational::from(BigInt::from(*l)))
            .min()
            .expect("nonempty candidate set");
        if let Some(prev) = levels.last() {
            assert!(mu > prev.mu, "round ratios must strictly increase");
        }
        let mut members: BTreeSet<usize> = BTreeSet::new();
        let mut reactions: Vec<ReactionVec> = Vec::new();
        for (i, k, l) in &scored {
            if k / BigRational::from(BigInt::from(*l)) != mu {
                continue;
            }
            reactions.push(basis[*i].clone());
            for (j, &e) in basis[*i].net().iter().enumerate() {
                if e < 0 && !partial.assigned(j) {
                    members.insert(j);
                }
            }
        }
        for &j in &members {
            partial.assign(j, mu.clone());
        }
        for v in &reactions {
            let (k, l) = imbalance_novelty(v, &partial);
            assert!(
                l == 0 && k.is_zero(),
                "minimizing generators must balance once their products are assigned"
            );
        }
        levels.push(Level { index, mu, members: members.into_iter().collect(), reactions });
    }

    let unassigned: Vec<String> = (0..dim)
        .filter(|&j| !partial.assigned(j))
        .map(|j| system.polymer_name(j).to_string())
        .collect();
    if !unassigned.is_empty() {
        return Err(LevelizeError::NotProducible(unassigned));
    }
    Ok(LevelAssignment { dim, levels, all_mu: partial.mu })
}

/// Outcome of the stability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Minimum first-round ratio (`None` when no generator has novelty).
    pub min_ratio: Option<BigRational>,
    /// A generator attaining the minimum.
    pub witness: Option<ReactionVec>,
}

/// Stability: every first-round ratio must exceed 1.  Assumes the on-target
/// set itself validates (producibility and within-set balance).
pub fn check_stable(spec: &OnTargetSpec, basis: &[ReactionVec]) -> StabilityReport {
    let base = PartialAssignment::from_spec(spec);
    let mut min_ratio: Option<BigRational> = None;
    let mut witness: Option<ReactionVec> = None;
    for v in basis {
        let (k, l) = imbalance_novelty(v, &base);
        if l == 0 {
            continue;
        }
        let ratio = k / BigRational::from(BigInt::from(l));
        if min_ratio.as_ref().map_or(true, |m| ratio < *m) {
            min_ratio = Some(ratio);
            witness = Some(v.clone());
        }
    }
    let stable = min_ratio.as_ref().map_or(true, |m| *m > BigRational::one());
    StabilityReport { stable, min_ratio, witness }
}

/// Polymer concentrations `c^mu` and the induced monomer totals, at a given
/// decimal precision (exact when the powers are exact).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcentrationTable {
    pub base: BigRational,
    pub digits: u32,
    /// Per polymer: name, exponent, concentration.
    pub rows: Vec<(String, BigRational, BigRational)>,
    /// Per monomer: name, conserved total.
    pub monomer_totals: Vec<(String, BigRational)>,
}

impl ConcentrationTable {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "base": render_ratio(&self.base),
            "digits": self.digits,
            "polymers": self.rows.iter().map(|(name, mu, x)| {
                json!({
                    "name": name,
                    "mu": render_ratio(mu),
                    "concentration": decimal_string(x, self.digits),
                })
            }).collect::<Vec<_>>(),
            "monomer_totals": self.monomer_totals.iter().map(|(name, t)| {
                json!({ "monomer": name, "total": decimal_string(t, self.digits) })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates an assignment at base `c` (must satisfy `0 < c < 1`).
pub fn concentrations(
    system: &System,
    assignment: &LevelAssignment,
    base: &BigRational,
    digits: u32,
) -> Result<ConcentrationTable, LevelizeError> {
    if *base <= BigRational::zero() || *base >= BigRational::one() {
        return Err(LevelizeError::BaseOutOfRange(render_ratio(base)));
    }
    let mut rows = Vec::with_capacity(assignment.dim);
    let mut x = Vec::with_capacity(assignment.dim);
    for j in 0..assignment.dim {
        let mu = assignment
            .mu_tilde(j)
            .expect("a completed assignment covers every polymer")
            .clone();
        let value = pow_decimal(base, &mu, digits)?;
        x.push(value.clone());
        rows.push((system.polymer_name(j).to_string(), mu, value));
    }
    let totals = system.monomer_totals(&x);
    let monomer_totals = system
        .monomers()
        .iter()
        .zip(totals)
        .map(|(m, t)| (m.as_str().to_string(), t))
        .collect();
    Ok(ConcentrationTable { base: base.clone(), digits, rows, monomer_totals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_cone, hilbert_basis, HilbertConfig};
    use crate::model::{MonomerId, Polymer};
    use crate::ratio::rat;

    fn cascade() -> (System, OnTargetSpec, Vec<ReactionVec>) {
        let s = crate::parse::parse_system(
            "monomer a\nmonomer b\nmonomer c\n\
             polymer A = a a\npolymer B = a b\npolymer C = c\n\
             polymer X = a a a b\npolymer Y = b b c c\npolymer Z = b b c c c\n",
        )
        .unwrap();
        let spec = OnTargetSpec::uniform(&s, [0, 1, 2]).unwrap();
        let basis = hilbert_basis(&build_cone(&s, &spec), &HilbertConfig::default())
            .unwrap()
            .vectors()
            .to_vec();
        (s, spec, basis)
    }

    fn dimer() -> (System, Vec<ReactionVec>) {
        let s = System::new(
            vec![MonomerId::new("a").unwrap()],
            vec![
                ("A".into(), Polymer::from_names(["a"]).unwrap()),
                ("D".into(), Polymer::from_names(["a", "a"]).unwrap()),
            ],
        )
        .unwrap();
        let basis = vec![s.reaction(vec![2, -1]).unwrap()];
        (s, basis)
    }

    #[test]
    fn imbalance_novelty_tracks_assignment() {
        let (s, spec, basis) = cascade();
        let mut partial = PartialAssignment::from_spec(&spec);
        let alpha = s.reaction(vec![1, 1, 0, -1, 0, 0]).unwrap();
        let beta = s.reaction(vec![0, 3, 2, -1, -1, 0]).unwrap();
        assert_eq!(imbalance_novelty(&alpha, &partial), (rat(2, 1), 1));
        assert_eq!(imbalance_novelty(&beta, &partial), (rat(5, 1), 2));
        partial.assign(3, rat(2, 1)); // X
        assert_eq!(imbalance_novelty(&alpha, &partial), (rat(0, 1), 0));
        assert_eq!(imbalance_novelty(&beta, &partial), (rat(3, 1), 1));
        let _ = basis;
    }

    #[test]
    fn cascade_levels_golden() {
        let (s, spec, basis) = cascade();
        let a = levelize(&s, &spec, &basis).unwrap();
        assert_eq!(a.levels().len(), 3);

        let l1 = &a.levels()[0];
        assert_eq!((l1.index, &l1.mu), (1, &rat(2, 1)));
        assert_eq!(l1.members, vec![s.polymer_index("X").unwrap()]);
        let r1: Vec<String> = l1.reactions.iter().map(|v| v.render(&s)).collect();
        assert_eq!(r1, vec!["A + B -> X"]);

        let l2 = &a.levels()[1];
        assert_eq!((l2.index, &l2.mu), (2, &rat(3, 1)));
        assert_eq!(l2.members, vec![s.polymer_index("Y").unwrap()]);
        let r2: Vec<String> = l2.reactions.iter().map(|v| v.render(&s)).collect();
        assert_eq!(r2, vec!["2B + 2C -> A + Y", "3B + 2C -> X + Y"]);

        let l3 = &a.levels()[2];
        assert_eq!((l3.index, &l3.mu), (3, &rat(4, 1)));
        assert_eq!(l3.members, vec![s.polymer_index("Z").unwrap()]);
        let r3: Vec<String> = l3.reactions.iter().map(|v| v.render(&s)).collect();
        assert_eq!(r3, vec!["2B + 3C -> A + Z", "3B + 3C -> X + Z"]);

        let want: Vec<(&str, BigRational)> = vec![
            ("A", rat(1, 1)),
            ("B", rat(1, 1)),
            ("C", rat(1, 1)),
            ("X", rat(2, 1)),
            ("Y", rat(3, 1)),
            ("Z", rat(4, 1)),
        ];
        for (name, mu) in want {
            assert_eq!(a.mu_tilde(s.polymer_index(name).unwrap()), Some(&mu), "{name}");
        }
        assert_eq!(a.mu1(), Some(&rat(2, 1)));
    }

    #[test]
    fn levels_json_shape() {
        let (s, spec, basis) = cascade();
        let a = levelize(&s, &spec, &basis).unwrap();
        let v = a.to_json(&s);
        assert_eq!(v["levels"][0]["mu"], "2/1");
        assert_eq!(v["levels"][0]["members"][0], "X");
        assert_eq!(v["extended_mu"]["Z"], "4/1");
        assert_eq!(v["levels"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn stability_golden() {
        let (_, spec, basis) = cascade();
        let report = check_stable(&spec, &basis);
        assert!(report.stable);
        assert_eq!(report.min_ratio, Some(rat(2, 1)));
        assert_eq!(report.witness.unwrap().net(), &[1, 1, 0, -1, 0, 0]);
    }

    #[test]
    fn splitting_is_unstable() {
        // On-target dimer splitting into two off-target halves: ratio 1/2.
        let (s, _) = dimer();
        let spec = OnTargetSpec::uniform(&s, [1]).unwrap();
        let basis = vec![s.reaction(vec![-2, 1]).unwrap()];
        let report = check_stable(&spec, &basis);
        assert!(!report.stable);
        assert_eq!(report.min_ratio, Some(rat(1, 2)));
        let a = levelize(&s, &spec, &basis).unwrap();
        assert_eq!(a.mu_tilde(0), Some(&rat(1, 2)));
    }

    #[test]
    fn fractional_spec_mu() {
        let (s, basis) = dimer();
        let spec = OnTargetSpec::new(&s, [(0, rat(1, 2))]).unwrap();
        let a = levelize(&s, &spec, &basis).unwrap();
        assert_eq!(a.mu_tilde(1), Some(&rat(1, 1))); // 2 * 1/2 over novelty 1
    }

    #[test]
    fn unproducible_polymer_is_an_error() {
        let (s, _) = dimer();
        let spec = OnTargetSpec::uniform(&s, [0]).unwrap();
        let err = levelize(&s, &spec, &[]).unwrap_err();
        assert_eq!(err, LevelizeError::NotProducible(vec!["D".into()]));
    }

    #[test]
    fn no_novelty_when_everything_on_target() {
        let (s, basis) = dimer();
        let spec = OnTargetSpec::uniform(&s, [0, 1]).unwrap();
        let report = check_stable(&spec, &basis);
        assert!(report.stable);
        assert_eq!(report.min_ratio, None);
        let a = levelize(&s, &spec, &basis).unwrap();
        assert!(a.levels().is_empty());
        assert_eq!(a.mu1(), None);
    }

    #[test]
    fn concentration_table_exact() {
        let (s, spec, basis) = cascade();
        let a = levelize(&s, &spec, &basis).unwrap();
        let t = concentrations(&s, &a, &rat(1, 100), 50).unwrap();
        let by_name: BTreeMap<&str, &BigRational> =
            t.rows.iter().map(|(n, _, x)| (n.as_str(), x)).collect();
        assert_eq!(by_name["A"], &rat(1, 100));
        assert_eq!(by_name["X"], &rat(1, 10_000));
        assert_eq!(by_name["Y"], &rat(1, 1_000_000));
        assert_eq!(by_name["Z"], &rat(1, 100_000_000));
        let totals: BTreeMap<&str, &BigRational> =
            t.monomer_totals.iter().map(|(n, x)| (n.as_str(), x)).collect();
        assert_eq!(totals["a"], &rat(303, 10_000));
        assert_eq!(totals["b"], &rat(1_010_202, 100_000_000));
        assert_eq!(totals["c"], &rat(1_000_203, 100_000_000));
        let v = t.to_json();
        assert_eq!(v["polymers"][0]["name"], "A");
        assert_eq!(v["polymers"][0]["concentration"], "0.01");
        assert_eq!(v["monomer_totals"][0]["total"], "0.0303");
    }

    #[test]
    fn base_must_be_sub_unity() {
        let (s, spec, basis) = cascade();
        let a = levelize(&s, &spec, &basis).unwrap();
        for bad in [rat(0, 1), rat(1, 1), rat(3, 2), rat(-1, 2)] {
            assert!(matches!(
                concentrations(&s, &a, &bad, 20),
                Err(LevelizeError::BaseOutOfRange(_))
            ));
        }
    }
}
