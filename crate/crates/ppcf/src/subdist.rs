//! Sparse sub-distributions over the naturals: the ground semantic domain.
//!
//! A `SubDist` assigns exact rational weights to finitely many naturals with
//! total mass at most 1. Zero weights are never stored, so structural
//! equality is extensional equality. The empty sub-distribution is the least
//! element of the pointwise order.

use crate::prob::{show_rat, Rat};
use num::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistError {
    #[error("weight error: {0}")]
    Weight(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubDist {
    weights: BTreeMap<u64, Rat>,
}

impl SubDist {
    pub fn empty() -> SubDist {
        SubDist::default()
    }

    pub fn dirac(n: u64) -> SubDist {
        let mut weights = BTreeMap::new();
        weights.insert(n, Rat::one());
        SubDist { weights }
    }

    /// Builds from (index, weight) pairs, merging duplicates and eliding
    /// zeros. Rejects negative weights and total mass above 1.
    pub fn from_pairs<I>(pairs: I) -> Result<SubDist, DistError>
    where
        I: IntoIterator<Item = (u64, Rat)>,
    {
        let mut weights: BTreeMap<u64, Rat> = BTreeMap::new();
        for (n, w) in pairs {
            if w.is_negative() {
                return Err(DistError::Weight(format!("negative weight {}", show_rat(&w))));
            }
            if w.is_zero() {
                continue;
            }
            *weights.entry(n).or_insert_with(Rat::zero) += w;
        }
        let d = SubDist { weights };
        if d.mass() > Rat::one() {
            return Err(DistError::Weight(format!("mass {} exceeds 1", show_rat(&d.mass()))));
        }
        Ok(d)
    }

    pub fn weight(&self, n: u64) -> Rat {
        self.weights.get(&n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn mass(&self) -> Rat {
        self.weights.values().fold(Rat::zero(), |acc, w| acc + w)
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Rat)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.weights.keys().copied()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.weights.keys().next_back().copied()
    }
}

/// Pointwise Σ_i weights_i · dists_i. Weights must be nonnegative with sum
/// at most 1; the two slices must have equal length.
pub fn convex_combine(weights: &[Rat], dists: &[SubDist]) -> Result<SubDist, DistError> {
    if weights.len() != dists.len() {
        return Err(DistError::Dimension(format!(
            "{} weights vs {} distributions",
            weights.len(),
            dists.len()
        )));
    }
    let mut total = Rat::zero();
    for w in weights {
        if w.is_negative() {
            return Err(DistError::Weight(format!("negative weight {}", show_rat(w))));
        }
        total += w;
    }
    if total > Rat::one() {
        return Err(DistError::Weight(format!("weights sum to {}", show_rat(&total))));
    }
    let mut acc: BTreeMap<u64, Rat> = BTreeMap::new();
    for (w, d) in weights.iter().zip(dists) {
        if w.is_zero() {
            continue;
        }
        for (n, dw) in d.iter() {
            *acc.entry(*n).or_insert_with(Rat::zero) += w * dw;
        }
    }
    acc.retain(|_, w| !w.is_zero());
    let out = SubDist { weights: acc };
    debug_assert!(out.mass() <= Rat::one());
    Ok(out)
}

/// λ·d, the scalar action d ⊕_λ ⊥.
pub fn scale(lam: &Rat, d: &SubDist) -> Result<SubDist, DistError> {
    convex_combine(std::slice::from_ref(lam), std::slice::from_ref(d))
}

/// Reindexing n ↦ n+1: the successor action (0, d_0, d_1, ...).
pub fn shift(d: &SubDist) -> SubDist {
    let weights = d.weights.iter().map(|(n, w)| (n + 1, w.clone())).collect();
    SubDist { weights }
}

/// Drops every entry with index above `cap`, keeping a pointwise lower bound.
pub fn truncate(d: &SubDist, cap: u64) -> SubDist {
    let weights = d
        .weights
        .iter()
        .filter(|(n, _)| **n <= cap)
        .map(|(n, w)| (*n, w.clone()))
        .collect();
    SubDist { weights }
}

/// The pointwise order: d1(n) ≤ d2(n) for every n.
pub fn pointwise_leq(d1: &SubDist, d2: &SubDist) -> bool {
    d1.iter().all(|(n, w)| *w <= d2.weight(*n))
}

/// sup_n |d1(n) − d2(n)|, the exact sup-norm distance.
pub fn sup_diff(d1: &SubDist, d2: &SubDist) -> Rat {
    let mut best = Rat::zero();
    for n in d1.support().chain(d2.support()) {
        let gap = (d1.weight(n) - d2.weight(n)).abs();
        if gap > best {
            best = gap;
        }
    }
    best
}

impl Serialize for SubDist {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            mass: String,
            weights: BTreeMap<u64, String>,
        }
        let repr = Repr {
            mass: show_rat(&self.mass()),
            weights: self.weights.iter().map(|(n, w)| (*n, show_rat(w))).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SubDist {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<SubDist, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            mass: String,
            weights: BTreeMap<u64, String>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let pairs: Result<Vec<(u64, Rat)>, _> = repr
            .weights
            .into_iter()
            .map(|(n, s)| crate::prob::parse_rat(&s).map(|w| (n, w)))
            .collect();
        let d = SubDist::from_pairs(pairs.map_err(D::Error::custom)?).map_err(D::Error::custom)?;
        let mass = crate::prob::parse_rat(&repr.mass).map_err(D::Error::custom)?;
        if mass != d.mass() {
            return Err(D::Error::custom("mass field disagrees with weights"));
        }
        Ok(d)
    }
}
