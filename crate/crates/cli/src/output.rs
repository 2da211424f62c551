//! Result files: atomic writes and the JSON-lines report records.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use credweight::eval::benchmark::{compare_schemes, CellOutcome};
use credweight::weighting::Scheme;
use serde_json::{json, Value};

use crate::config::Plan;

/// Writes `contents` to a temporary file beside `path`, then renames it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn jsonl(records: &[Value]) -> Vec<u8> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r).expect("serializing a JSON value");
        out.push(b'\n');
    }
    out
}

/// Report records: the resolved configuration, then per-fold and per-cell
/// results in cell order, then the cred-tfidf vs tfidf comparison. Nothing
/// here depends on timing, so reruns produce identical bytes.
pub fn report_records(plan: &Plan, outcomes: &[CellOutcome]) -> Vec<Value> {
    let mut records = vec![json!({
        "record": "config",
        "settings": plan.settings,
        "datasets": plan.datasets,
        "cells": plan.cells.iter().map(|c| format!("{} {}", c.dataset, c.method())).collect::<Vec<_>>(),
    })];
    for o in outcomes {
        let head = json!({
            "dataset": o.cell.dataset,
            "method": o.cell.method(),
            "scheme": o.cell.scheme,
            "ngram": o.cell.order,
        });
        match &o.result {
            Ok(report) => {
                for f in &report.folds {
                    let mut r = head.clone();
                    let m = r.as_object_mut().unwrap();
                    m.insert("record".into(), json!("fold"));
                    m.insert("fold".into(), json!(f.fold));
                    m.insert("accuracy".into(), json!(f.accuracy));
                    m.insert("n_train".into(), json!(f.n_train));
                    m.insert("n_test".into(), json!(f.n_test));
                    m.insert("empty_test_docs".into(), json!(f.empty_test_docs));
                    records.push(r);
                }
                let mut r = head.clone();
                let m = r.as_object_mut().unwrap();
                m.insert("record".into(), json!("cell"));
                m.insert("config".into(), json!(report.config));
                m.insert("folds".into(), json!(report.fold_count));
                m.insert("mean_accuracy".into(), json!(report.mean_accuracy));
                records.push(r);
            }
            Err(e) => {
                let mut r = head.clone();
                let m = r.as_object_mut().unwrap();
                m.insert("record".into(), json!("cell_error"));
                m.insert("error".into(), json!(e));
                records.push(r);
            }
        }
    }
    if let Some(cmp) = compare_schemes(outcomes, Scheme::CredTfidf, Scheme::Tfidf) {
        records.push(json!({
            "record": "comparison",
            "a": "cred-tfidf",
            "b": "tfidf",
            "pairs": cmp.pairs,
            "n_nonzero": cmp.n_nonzero,
            "w_plus": cmp.w_plus,
            "w_minus": cmp.w_minus,
            "p_value": cmp.p_value,
            "p_method": cmp.method,
        }));
    }
    records
}

pub fn timing_records(outcomes: &[CellOutcome]) -> Vec<Value> {
    let mut records = Vec::new();
    for o in outcomes {
        if let Ok(report) = &o.result {
            for f in &report.folds {
                records.push(json!({
                    "dataset": o.cell.dataset,
                    "method": o.cell.method(),
                    "fold": f.fold,
                    "seconds": f.seconds,
                }));
            }
            records.push(json!({
                "dataset": o.cell.dataset,
                "method": o.cell.method(),
                "fold": "total",
                "seconds": report.seconds,
            }));
        }
    }
    records
}

pub fn write_jsonl(path: &Path, records: &[Value]) -> Result<()> {
    write_atomic(path, &jsonl(records))
}
