#![allow(dead_code)]

use credweight::corpus::{Document, Label};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sentiment-like corpus: each class draws mostly from shared words plus a
/// class-leaning pool, so tokens span the whole range of class skew.
pub fn synthetic_corpus(per_class: usize, doc_len: usize, seed: u64) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shared: Vec<String> = (0..40).map(|i| format!("w{i}")).collect();
    let pos: Vec<String> = (0..15).map(|i| format!("good{i}")).collect();
    let neg: Vec<String> = (0..15).map(|i| format!("bad{i}")).collect();
    let mut docs = Vec::new();
    for (name, label, own, other) in [("pos", Label::Pos, &pos, &neg), ("neg", Label::Neg, &neg, &pos)] {
        for i in 0..per_class {
            let tokens = (0..doc_len)
                .map(|_| {
                    let r: f64 = rng.gen();
                    let pool = if r < 0.6 {
                        &shared
                    } else if r < 0.9 {
                        own
                    } else {
                        other
                    };
                    pool.choose(&mut rng).unwrap().clone()
                })
                .collect();
            docs.push(Document::new(format!("{name}/{i:04}"), label, tokens));
        }
    }
    docs
}

/// Linearly separable corpus: classes use disjoint word pools.
pub fn separable_corpus(per_class: usize, seed: u64) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for label in [Label::Pos, Label::Neg] {
        let prefix = if label == Label::Pos { "p" } else { "n" };
        for i in 0..per_class {
            let tokens = (0..8).map(|_| format!("{prefix}{}", rng.gen_range(0..6))).collect();
            docs.push(Document::new(format!("{prefix}/{i:04}"), label, tokens));
        }
    }
    docs
}

pub fn tokens(words: &[&str]) -> Vec<String> {
    words.iter().map(|s| s.to_string()).collect()
}
