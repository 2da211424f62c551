use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::document::{Document, Label};
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;

/// A train/test partition of a document set.
#[derive(Clone, Debug)]
pub struct CorpusSplit<'a> {
    pub train: Vec<&'a Document>,
    pub test: Vec<&'a Document>,
    pub fold_index: Option<usize>,
}

impl<'a> CorpusSplit<'a> {
    /// A fixed train/test split, both sides sorted by id.
    pub fn fixed(train: &'a [Document], test: &'a [Document]) -> Self {
        let mut train: Vec<&Document> = train.iter().collect();
        let mut test: Vec<&Document> = test.iter().collect();
        train.sort_by(|a, b| a.id.cmp(&b.id));
        test.sort_by(|a, b| a.id.cmp(&b.id));
        CorpusSplit {
            train,
            test,
            fold_index: None,
        }
    }
}

/// Assigns every document a fold in `0..k`.
///
/// Each class is ordered by document id, shuffled with a seeded ChaCha8
/// stream and dealt round-robin. The deal for the second class continues
/// where the first one stopped, so both per-class and total fold sizes
/// differ by at most one. Input order does not affect the assignment.
pub fn fold_assignment(docs: &[Document], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    let mut seen = HashSet::with_capacity(docs.len());
    for d in docs {
        if !seen.insert(d.id.as_str()) {
            return Err(Error::DuplicateId(d.id.clone()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![usize::MAX; docs.len()];
    let mut next_fold = 0usize;
    for label in [Label::Pos, Label::Neg] {
        let mut members: Vec<usize> = (0..docs.len()).filter(|&i| docs[i].label == label).collect();
        if members.len() < k {
            return Err(Error::ClassTooSmall {
                label: label.as_i8(),
                found: members.len(),
                k,
            });
        }
        members.sort_by(|&a, &b| docs[a].id.cmp(&docs[b].id));
        members.shuffle(&mut rng);
        for idx in members {
            assignment[idx] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    Ok(assignment)
}

/// Stratified k-fold cross-validation splits, deterministic given `seed`.
pub fn stratified_k_fold(docs: &[Document], k: usize, seed: u64) -> Result<Vec<CorpusSplit<'_>>> {
    let assignment = fold_assignment(docs, k, seed)?;
    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.sort_by(|&a, &b| docs[a].id.cmp(&docs[b].id));
    let splits = (0..k)
        .map(|fold| {
            let (test, train): (Vec<usize>, Vec<usize>) = order.iter().partition(|&&i| assignment[i] == fold);
            CorpusSplit {
                train: train.into_iter().map(|i| &docs[i]).collect(),
                test: test.into_iter().map(|i| &docs[i]).collect(),
                fold_index: Some(fold),
            }
        })
        .collect();
    Ok(splits)
}
