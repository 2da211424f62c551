use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse feature vector: `(id, weight)` pairs with strictly increasing ids
/// and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector::default()
    }

    /// Builds a vector from arbitrary pairs: sorts by id, drops zeros and
    /// rejects duplicate ids or non-finite weights.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(id, _)| id);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!("duplicate feature id {}", w[0].0)));
        }
        if let Some(&(id, w)) = pairs.iter().find(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("feature {id} has weight {w}")));
        }
        pairs.retain(|&(_, w)| w != 0.0);
        Ok(SparseVector { entries: pairs })
    }

    /// Caller guarantees sorted, unique ids and finite weights.
    pub(crate) fn from_sorted_unchecked(mut entries: Vec<(u32, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        entries.retain(|&(_, w)| w != 0.0);
        SparseVector { entries }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<f64> {
        self.entries
            .binary_search_by_key(&id, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(id, _)| id)
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum()
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    /// Largest id plus one, zero for the empty vector.
    pub fn dimension(&self) -> usize {
        self.entries.last().map_or(0, |&(id, _)| id as usize + 1)
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(id, w)| dense.get(id as usize).map_or(0.0, |d| d * w))
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        SparseVector::from_sorted_unchecked(self.entries.iter().map(|&(id, w)| (id, w * factor)).collect())
    }
}

/// Divides by the Euclidean norm; the empty vector is returned unchanged.
pub fn l2_normalize(v: &SparseVector) -> SparseVector {
    let norm = v.norm();
    if norm == 0.0 {
        return v.clone();
    }
    SparseVector::from_sorted_unchecked(v.entries.iter().map(|&(id, w)| (id, w / norm)).collect())
}
