use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Tolerance on the total weight of a distribution.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Probability mass over Schmidt indices: the unconditional mixture left
/// after every measurement outcome is discarded.
///
/// `parties` is 2 for `|eta_m>` mixtures and `j` for `j`-party `|xi_m>`
/// mixtures. Indices with exactly zero weight are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    entries: BTreeMap<u32, f64>,
    parties: u32,
}

impl OutcomeDistribution {
    /// All weight on a single index.
    pub fn point(m: u32, parties: u32) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(m, 1.0);
        Self { entries, parties }
    }

    /// Builds a distribution, merging repeated indices and checking
    /// non-negativity, normalization, a single index parity and `parties >= 2`.
    pub fn new(entries: impl IntoIterator<Item = (u32, f64)>, parties: u32) -> Result<Self> {
        if parties < 2 {
            return Err(Error::InvalidDistribution("parties must be at least 2"));
        }
        let mut acc = Accumulator::new(parties);
        for (m, w) in entries {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDistribution("weights must be finite and non-negative"));
            }
            acc.add(m, w);
        }
        let d = acc.finish();
        if (d.total() - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution("weights must sum to 1"));
        }
        if d.parity().is_none() && !d.entries.is_empty() {
            return Err(Error::InvalidDistribution("indices must share one parity"));
        }
        Ok(d)
    }

    pub fn parties(&self) -> u32 {
        self.parties
    }

    /// Same weights, relabelled as a `parties`-qubit mixture.
    pub fn with_parties(mut self, parties: u32) -> Self {
        self.parties = parties;
        self
    }

    /// Weight of index `m` (zero when absent).
    pub fn weight(&self, m: u32) -> f64 {
        self.entries.get(&m).copied().unwrap_or(0.0)
    }

    /// `(index, weight)` pairs in ascending index order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, f64)> + '_ {
        self.entries.iter().map(|(&m, &w)| (m, w))
    }

    /// `(index, weight)` pairs in descending index order.
    pub fn iter_desc(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.iter().rev()
    }

    pub fn indices(&self) -> Vec<u32> {
        self.entries.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    pub fn min_index(&self) -> Option<u32> {
        self.entries.keys().next().copied()
    }

    /// Common parity of all indices, or `None` if mixed or empty.
    pub fn parity(&self) -> Option<u32> {
        let first = self.min_index()? % 2;
        self.entries.keys().all(|m| m % 2 == first).then_some(first)
    }

    /// Largest absolute weight difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .keys()
            .chain(other.entries.keys())
            .map(|&m| (self.weight(m) - other.weight(m)).abs())
            .fold(0.0, f64::max)
    }
}

/// Sums weights per index while a distribution is being assembled.
#[derive(Debug)]
pub(crate) struct Accumulator {
    entries: BTreeMap<u32, f64>,
    parties: u32,
}

impl Accumulator {
    pub(crate) fn new(parties: u32) -> Self {
        Self { entries: BTreeMap::new(), parties }
    }

    pub(crate) fn add(&mut self, m: u32, w: f64) {
        if w != 0.0 {
            *self.entries.entry(m).or_insert(0.0) += w;
        }
    }

    /// Rounding can push a merged weight a few ulps past one; it is clamped.
    pub(crate) fn finish(mut self) -> OutcomeDistribution {
        for w in self.entries.values_mut() {
            *w = w.min(1.0);
        }
        OutcomeDistribution { entries: self.entries, parties: self.parties }
    }
}
