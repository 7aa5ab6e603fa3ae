//! Finite multisets over an ordered element type.
//!
//! A multiset stores strictly positive counts only; an element with count
//! zero is absent.  This keeps equality, iteration order, and rendering
//! canonical without normalization passes.

use std::collections::{BTreeMap, BTreeSet};

/// A finite multiset with `u64` multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Multiset<T: Ord> {
    counts: BTreeMap<T, u64>,
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Multiset { counts: BTreeMap::new() }
    }

    /// Builds a multiset from individual occurrences (duplicates accumulate).
    pub fn from_elements<I: IntoIterator<Item = T>>(elems: I) -> Self {
        let mut m = Self::new();
        for e in elems {
            m.insert(e, 1);
        }
        m
    }

    /// Builds a multiset from `(element, count)` pairs; zero counts are dropped.
    pub fn from_counts<I: IntoIterator<Item = (T, u64)>>(pairs: I) -> Self {
        let mut m = Self::new();
        for (e, n) in pairs {
            m.insert(e, n);
        }
        m
    }

    pub fn insert(&mut self, elem: T, n: u64) {
        if n > 0 {
            *self.counts.entry(elem).or_insert(0) += n;
        }
    }

    pub fn count(&self, elem: &T) -> u64 {
        self.counts.get(elem).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of distinct elements.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Total number of occurrences, `|M| = sum of counts`.
    pub fn cardinality(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Pointwise sum `M + N`.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, n) in &other.counts {
            out.insert(e.clone(), *n);
        }
        out
    }

    /// Pointwise difference `M - N`, defined only when `N <= M` pointwise.
    /// Returns `None` when the difference would go negative (caller bug).
    pub fn sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        for (e, n) in &other.counts {
            let have = out.counts.get_mut(e)?;
            if *have < *n {
                return None;
            }
            *have -= n;
            if *have == 0 {
                out.counts.remove(e);
            }
        }
        Some(out)
    }

    /// Restriction `M ∩ T`: keeps the full multiplicity of every element that
    /// lies in the set `keep`, drops the rest.
    pub fn intersect_set(&self, keep: &BTreeSet<T>) -> Self {
        Multiset {
            counts: self
                .counts
                .iter()
                .filter(|(e, _)| keep.contains(e))
                .map(|(e, n)| (e.clone(), *n))
                .collect(),
        }
    }

    /// `true` when every count in `self` is at most the matching count in `other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.counts.iter().all(|(e, n)| other.count(e) >= *n)
    }

    /// Iterates `(element, count)` pairs in element order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, u64)> {
        self.counts.iter().map(|(e, n)| (e, *n))
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::from_elements(iter)
    }
}
