//! Core data model: monomers, polymers, systems, on-target specifications,
//! and net reaction vectors.
//!
//! Design notes:
//!
//! * A [`Polymer`] is a non-empty multiset of monomer types.  Equality is
//!   multiset equality; display names attached by input files are carried by
//!   the [`System`], not the polymer, and never participate in equality.
//! * A [`System`] fixes an ordering of monomers and polymers (declaration
//!   order from the input file) and materializes the conservation matrix `A`
//!   whose `(i, j)` entry counts monomer `i` in polymer `j`.  Monomer totals
//!   of any concentration vector `x` are `A x`.
//! * A [`ReactionVec`] is a net integer vector over the polymer ordering:
//!   positive entries are reactants, negative entries products.  Every
//!   constructor checks `A net = 0` (monomer conservation), so a value of
//!   this type is always a genuine reconfiguration of the system.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;
use crate::multiset::Multiset;
use crate::ratio::render_ratio;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("empty name")]
    EmptyName,
    #[error("name `{0}` contains whitespace, `#`, or `=`")]
    InvalidName(String),
    #[error("polymer must contain at least one monomer")]
    EmptyPolymer,
    #[error("duplicate monomer `{0}`")]
    DuplicateMonomer(String),
    #[error("duplicate polymer name `{0}`")]
    DuplicatePolymerName(String),
    #[error("polymers `{0}` and `{1}` have identical contents")]
    DuplicatePolymerContent(String, String),
    #[error("polymer `{0}` uses undeclared monomer `{1}`")]
    UnknownMonomer(String, String),
    #[error("monomer `{0}` appears in no polymer")]
    UnusedMonomer(String),
    #[error("polymer index {0} out of range")]
    PolymerIndex(usize),
    #[error("duplicate on-target polymer index {0}")]
    DuplicateOnTarget(usize),
    #[error("mu must lie in (0, 1], got {0}")]
    MuOutOfRange(String),
    #[error("reaction vector has wrong length")]
    DimensionMismatch,
    #[error("reaction vector does not conserve monomer counts")]
    NotConserved,
}

/// Name of a monomer type.  Ordering is lexicographic on the name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomerId(String);

impl MonomerId {
    pub fn new(name: &str) -> Result<Self, ModelError> {
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if name.chars().any(|c| c.is_whitespace() || c == '#' || c == '=') {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        Ok(MonomerId(name.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MonomerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A non-empty multiset of monomers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Polymer {
    counts: Multiset<MonomerId>,
}

impl Polymer {
    pub fn new(counts: Multiset<MonomerId>) -> Result<Self, ModelError> {
        if counts.is_empty() {
            return Err(ModelError::EmptyPolymer);
        }
        Ok(Polymer { counts })
    }

    pub fn from_names<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Result<Self, ModelError> {
        let mut ms = Multiset::new();
        for n in names {
            ms.insert(MonomerId::new(n)?, 1);
        }
        Polymer::new(ms)
    }

    pub fn counts(&self) -> &Multiset<MonomerId> {
        &self.counts
    }

    pub fn count(&self, m: &MonomerId) -> u64 {
        self.counts.count(m)
    }

    /// `|P|`: total number of monomers in the polymer.
    pub fn size(&self) -> u64 {
        self.counts.cardinality()
    }
}

/// A finite monomer-polymer system with fixed index orderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    monomers: Vec<MonomerId>,
    polymer_names: Vec<String>,
    polymers: Vec<Polymer>,
    /// `conservation[i][j]` = count of monomer `i` in polymer `j`.
    conservation: Vec<Vec<i64>>,
}

impl System {
    pub fn new(monomers: Vec<MonomerId>, polymers: Vec<(String, Polymer)>) -> Result<Self, ModelError> {
        let mut seen_m = BTreeSet::new();
        for m in &monomers {
            if !seen_m.insert(m.clone()) {
                return Err(ModelError::DuplicateMonomer(m.to_string()));
            }
        }
        let mut seen_names: BTreeSet<&str> = BTreeSet::new();
        for (name, _) in &polymers {
            MonomerId::new(name)?; // same token rules as monomer names
            if !seen_names.insert(name) {
                return Err(ModelError::DuplicatePolymerName(name.clone()));
            }
        }
        for i in 0..polymers.len() {
            for j in (i + 1)..polymers.len() {
                if polymers[i].1 == polymers[j].1 {
                    return Err(ModelError::DuplicatePolymerContent(
                        polymers[i].0.clone(),
                        polymers[j].0.clone(),
                    ));
                }
            }
        }
        for (name, p) in &polymers {
            for (m, _) in p.counts.iter() {
                if !seen_m.contains(m) {
                    return Err(ModelError::UnknownMonomer(name.clone(), m.to_string()));
                }
            }
        }
        for m in &monomers {
            if polymers.iter().all(|(_, p)| p.count(m) == 0) {
                return Err(ModelError::UnusedMonomer(m.to_string()));
            }
        }
        let conservation = monomers
            .iter()
            .map(|m| polymers.iter().map(|(_, p)| p.count(m) as i64).collect())
            .collect();
        let (polymer_names, polymers) = polymers.into_iter().unzip();
        Ok(System { monomers, polymer_names, polymers, conservation })
    }

    pub fn monomer_count(&self) -> usize {
        self.monomers.len()
    }

    pub fn polymer_count(&self) -> usize {
        self.polymers.len()
    }

    pub fn monomers(&self) -> &[MonomerId] {
        &self.monomers
    }

    pub fn polymer(&self, j: usize) -> &Polymer {
        &self.polymers[j]
    }

    pub fn polymers(&self) -> &[Polymer] {
        &self.polymers
    }

    pub fn polymer_name(&self, j: usize) -> &str {
        &self.polymer_names[j]
    }

    pub fn polymer_index(&self, name: &str) -> Option<usize> {
        self.polymer_names.iter().position(|n| n == name)
    }

    pub fn monomer_index(&self, name: &str) -> Option<usize> {
        self.monomers.iter().position(|m| m.as_str() == name)
    }

    /// The conservation matrix `A` (monomer rows, polymer columns).
    pub fn conservation(&self) -> &[Vec<i64>] {
        &self.conservation
    }

    /// Monomer totals `A x` of a rational polymer-concentration vector.
    pub fn monomer_totals(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.polymer_count());
        self.conservation
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(&c, v)| BigRational::from(BigInt::from(c)) * v)
                    .sum()
            })
            .collect()
    }

    /// Monomer totals `A x` in double precision.
    pub fn monomer_totals_f64(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.polymer_count());
        self.conservation
            .iter()
            .map(|row| row.iter().zip(x).map(|(&c, v)| c as f64 * v).sum())
            .collect()
    }

    /// Checked construction of a reaction vector over this system.
    pub fn reaction(&self, net: Vec<i64>) -> Result<ReactionVec, ModelError> {
        ReactionVec::new(self, net)
    }

    /// Renders the system in the text input format (monomer and polymer
    /// declarations; see [`crate::parse`]).
    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.monomers {
            out.push_str(&format!("monomer {}\n", m));
        }
        for (name, p) in self.polymer_names.iter().zip(&self.polymers) {
            out.push_str(&format!("polymer {} =", name));
            for m in &self.monomers {
                for _ in 0..p.count(m) {
                    out.push_str(&format!(" {}", m));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Renders the system followed by the on-target declarations.
    pub fn render_with_spec(&self, spec: &OnTargetSpec) -> String {
        let mut out = self.render();
        for (j, mu) in spec.iter() {
            out.push_str(&format!("ontarget {} mu={}\n", self.polymer_name(j), render_ratio(mu)));
        }
        out
    }
}

/// The on-target polymer set `S` with its exponent prescription `mu`.
///
/// Invariants: members index into the owning system, each with a rational
/// exponent in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnTargetSpec {
    mu: BTreeMap<usize, BigRational>,
}

impl OnTargetSpec {
    pub fn new<I: IntoIterator<Item = (usize, BigRational)>>(
        system: &System,
        entries: I,
    ) -> Result<Self, ModelError> {
        let mut mu = BTreeMap::new();
        for (j, m) in entries {
            if j >= system.polymer_count() {
                return Err(ModelError::PolymerIndex(j));
            }
            if !m.is_positive() || m > BigRational::one() {
                return Err(ModelError::MuOutOfRange(render_ratio(&m)));
            }
            if mu.insert(j, m).is_some() {
                return Err(ModelError::DuplicateOnTarget(j));
            }
        }
        Ok(OnTargetSpec { mu })
    }

    /// Uniform prescription `mu = 1` on the given members.
    pub fn uniform<I: IntoIterator<Item = usize>>(system: &System, members: I) -> Result<Self, ModelError> {
        Self::new(system, members.into_iter().map(|j| (j, BigRational::one())))
    }

    pub fn contains(&self, j: usize) -> bool {
        self.mu.contains_key(&j)
    }

    pub fn mu(&self, j: usize) -> Option<&BigRational> {
        self.mu.get(&j)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mu.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.mu.iter().map(|(j, m)| (*j, m))
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

/// Net reaction vector: `net[j] > 0` means polymer `j` is consumed
/// (reactant), `net[j] < 0` produced.  Monomer conservation `A net = 0` is
/// checked at construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReactionVec {
    net: Vec<i64>,
}

impl ReactionVec {
    pub fn new(system: &System, net: Vec<i64>) -> Result<Self, ModelError> {
        Self::from_net(system.conservation(), net)
    }

    /// Construction against a raw conservation matrix (monomer rows).
    pub fn from_net(conservation: &[Vec<i64>], net: Vec<i64>) -> Result<Self, ModelError> {
        for row in conservation {
            if row.len() != net.len() {
                return Err(ModelError::DimensionMismatch);
            }
            let dot: i64 = row.iter().zip(&net).map(|(&a, &v)| a * v).sum();
            if dot != 0 {
                return Err(ModelError::NotConserved);
            }
        }
        Ok(ReactionVec { net })
    }

    pub fn len(&self) -> usize {
        self.net.len()
    }

    pub fn is_empty(&self) -> bool {
        self.net.is_empty()
    }

    pub fn entry(&self, j: usize) -> i64 {
        self.net[j]
    }

    pub fn net(&self) -> &[i64] {
        &self.net
    }

    pub fn is_zero(&self) -> bool {
        self.net.iter().all(|&x| x == 0)
    }

    /// Reactant multiset (indices with positive net).
    pub fn reactants(&self) -> Multiset<usize> {
        Multiset::from_counts(
            self.net
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(j, &x)| (j, x as u64)),
        )
    }

    /// Product multiset (indices with negative net).
    pub fn products(&self) -> Multiset<usize> {
        Multiset::from_counts(
            self.net
                .iter()
                .enumerate()
                .filter(|(_, &x)| x < 0)
                .map(|(j, &x)| (j, (-x) as u64)),
        )
    }

    /// Entropy loss `e = |reactants| - |products| = sum of net entries`.
    pub fn entropy_loss(&self) -> i64 {
        self.net.iter().sum()
    }

    /// `true` when every positive entry lies in `S` (the reaction is
    /// canonical for the given on-target set).
    pub fn is_canonical(&self, spec: &OnTargetSpec) -> bool {
        self.net
            .iter()
            .enumerate()
            .all(|(j, &x)| x <= 0 || spec.contains(j))
    }

    /// Renders the reaction with polymer names, e.g. `3B + 2C -> X + Y`.
    pub fn render(&self, system: &System) -> String {
        let side = |selector: fn(i64) -> i64| {
            let terms: Vec<String> = self
                .net
                .iter()
                .enumerate()
                .filter_map(|(j, &x)| {
                    let n = selector(x);
                    if n > 0 {
                        Some(if n == 1 {
                            system.polymer_name(j).to_string()
                        } else {
                            format!("{}{}", n, system.polymer_name(j))
                        })
                    } else {
                        None
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        format!("{} -> {}", side(|x| x), side(|x| -x))
    }
}

/// Outcome of the on-target validity check, with witnesses for failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Condition 1: every polymer outside `S` has a producing generator.
    pub producible: bool,
    /// Polymers violating condition 1.
    pub unproducible: Vec<usize>,
    /// Condition 2: `mu . w = 0` for every kernel vector `w` of `A`
    /// restricted to the `S` columns (within-`S` reconfigurations balance).
    pub balanced_within: bool,
    /// A violating kernel vector over the `S` columns (in member order).
    pub violating_kernel_vector: Option<Vec<BigInt>>,
    /// The nonzero value `mu . w` of the violating vector.
    pub violation_value: Option<BigRational>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.producible && self.balanced_within
    }
}

/// Checks that `(S, mu)` is a valid on-target prescription: every off-target
/// polymer is producible from `S` (witnessed inside the generating set
/// `basis`), and the prescribed exponents balance every within-`S`
/// reconfiguration.
pub fn check_on_target(system: &System, spec: &OnTargetSpec, basis: &[ReactionVec]) -> ValidationReport {
    let mut unproducible = Vec::new();
    for j in 0..system.polymer_count() {
        if spec.contains(j) {
            continue;
        }
        if !basis.iter().any(|h| h.entry(j) < 0) {
            unproducible.push(j);
        }
    }
    let members: Vec<usize> = spec.members().collect();
    let a_s: Vec<Vec<BigInt>> = system
        .conservation()
        .iter()
        .map(|row| members.iter().map(|&j| BigInt::from(row[j])).collect())
        .collect();
    let kernel = linalg::integer_kernel_basis(&a_s);
    let mut violating = None;
    let mut value = None;
    for w in kernel {
        let dot: BigRational = w
            .iter()
            .zip(&members)
            .map(|(wi, &j)| BigRational::from(wi.clone()) * spec.mu(j).expect("member"))
            .sum();
        if !dot.is_zero() {
            violating = Some(w);
            value = Some(dot);
            break;
        }
    }
    ValidationReport {
        producible: unproducible.is_empty(),
        unproducible,
        balanced_within: violating.is_none(),
        violating_kernel_vector: violating,
        violation_value: value,
    }
}
