use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::poly::Laurent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    F2,
    Z,
}

/// Ranks indexed by homological grading `i` and doubled quantum grading `2j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedRanks {
    /// `(i, 2j) -> rank` (free rank over the integers); only positive ranks.
    pub entries: BTreeMap<(i64, i64), usize>,
    /// Integer coefficients only: nontrivial elementary divisors per bidegree.
    pub torsion: BTreeMap<(i64, i64), Vec<i64>>,
    pub ring: Option<Ring>,
    pub components: usize,
}

impl BigradedRanks {
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    pub fn insert(&mut self, i: i64, j2: i64, rank: usize) {
        if rank > 0 {
            *self.entries.entry((i, j2)).or_insert(0) += rank;
        }
    }

    /// Ranks collapsed along `2δ = 2j - 2i`.
    pub fn delta_collapse(&self) -> DeltaRanks {
        let mut d = DeltaRanks::default();
        for (&(i, j2), &r) in &self.entries {
            d.add(j2 - 2 * i, r);
        }
        d
    }

    /// True when every entry sits at `2δ = -σ`.
    pub fn is_sigma_thin(&self, sigma: i64) -> bool {
        self.delta_collapse().is_sigma_thin(sigma)
    }

    /// `Σ (-1)^i rank · s^{2j}` with `s = q^{1/2}`.
    pub fn euler_characteristic(&self) -> Laurent {
        Laurent::from_terms(
            self.entries
                .iter()
                .map(|(&(i, j2), &r)| (j2, if i % 2 == 0 { r as i64 } else { -(r as i64) })),
        )
    }
}

/// Total rank per doubled δ-grading.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaRanks {
    pub entries: BTreeMap<i64, usize>,
}

impl DeltaRanks {
    pub fn add(&mut self, delta2: i64, rank: usize) {
        if rank > 0 {
            *self.entries.entry(delta2).or_insert(0) += rank;
        }
    }

    pub fn get(&self, delta2: i64) -> usize {
        self.entries.get(&delta2).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_sigma_thin(&self, sigma: i64) -> bool {
        self.entries.keys().all(|&d| d == -sigma)
    }

    /// The single populated δ-grading, if there is exactly one.
    pub fn single(&self) -> Option<i64> {
        match self.entries.len() {
            1 => self.entries.keys().next().copied(),
            _ => None,
        }
    }
}
