//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when an evaluated criterion fails.
//!
//! Criteria 1-3 need the six benchmark datasets under `$CREDWEIGHT_DATA`
//! (layout in the README). Without them they are reported as
//! `FAIL (not evaluated)`; set `CREDWEIGHT_ACCEPTANCE_STRICT=1` to make that
//! fail the run as well.

mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use common::synthetic_corpus;
use credweight::corpus::{stratified_k_fold, DatasetFormat, Document, Label, NgramOrder};
use credweight::eval::benchmark::{
    cell_accuracy, paired_cells, run_benchmark, BenchmarkSettings, CellOutcome, CellSpec, DatasetSpec, METHOD_ORDER,
};
use credweight::eval::{fit_cv_fold, midranks, wilcoxon_signed_ranks, FittedPipeline, PValueMethod, PipelineConfig};
use credweight::svm::{primal_objective, train, train_with_report, LinearModel, TrainConfig};
use credweight::weighting::{cred_score, raw_score, Scaling, Scheme, SparseVector, Weighter, WeightingConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Absolute tolerance, in accuracy points, against the published table.
const TABLE_TOLERANCE: f64 = 1.5;
const MIN_CRED_WINS: usize = 10;
const WILCOXON_ALPHA: f64 = 0.05;
const WEIGHTING_BUDGET_SECS: f64 = 10.0;
const SOLVER_BUDGET_SECS: f64 = 60.0;
const SOLVER_ORACLE_REL_TOL: f64 = 1e-4;
const FLIP_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-9;
const LOG_BASE_TOL: f64 = 1e-9;

const DATASETS: [&str; 6] = ["pl-sh", "pl-sub", "pl-2k", "imdb", "athr", "xgraph"];

/// Published accuracies (percent), rows in `METHOD_ORDER`, columns in
/// `DATASETS`.
const PUBLISHED: [[f64; 6]; 6] = [
    [77.1, 91.5, 88.1, 88.6, 85.8, 88.4],
    [78.0, 92.3, 89.2, 90.9, 86.5, 88.0],
    [77.5, 91.8, 88.7, 88.8, 86.5, 89.8],
    [78.6, 92.8, 89.7, 91.3, 87.4, 88.9],
    [75.5, 89.9, 87.0, 85.9, 86.7, 88.5],
    [76.0, 90.5, 89.5, 90.5, 86.7, 88.1],
];

enum Verdict {
    Pass(String),
    Fail(String),
    NotEvaluated(String),
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn main() {
    let _ = rayon::ThreadPoolBuilder::new().build_global();
    let strict = std::env::var("CREDWEIGHT_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let grid = DatasetGrid::load();
    type Criterion<'a> = (u32, &'static str, Box<dyn Fn() -> Verdict + 'a>);
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "tf-idf and cred-tf-idf table rows",
            Box::new(|| criterion_table_rows(&grid)),
        ),
        (2, "cred-tf-idf beats tf-idf", Box::new(|| criterion_ordering(&grid))),
        (3, "NBSVM table rows", Box::new(|| criterion_nbsvm_rows(&grid))),
        (4, "weighting properties", Box::new(criterion_weighting)),
        (5, "solver", Box::new(criterion_solver)),
        (6, "exact Wilcoxon vs enumeration", Box::new(criterion_wilcoxon)),
        (7, "no test-fold leakage", Box::new(criterion_leakage)),
    ];
    let mut failed = 0;
    for (n, name, run) in &criteria {
        let start = Instant::now();
        let verdict = run();
        let shared = if *n <= 3 { grid.seconds } else { 0.0 };
        let secs = start.elapsed().as_secs_f64() + shared;
        let (status, detail) = match verdict {
            Verdict::Pass(d) => ("PASS".to_string(), d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL".to_string(), d)
            }
            Verdict::NotEvaluated(d) => {
                if strict {
                    failed += 1;
                }
                ("FAIL (not evaluated)".to_string(), d)
            }
        };
        println!("criterion {n} [{name}]: {status} ({secs:.1}s) {detail}");
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- datasets

struct DatasetGrid {
    outcomes: Result<Vec<CellOutcome>, String>,
    /// Time spent running the shared grid, charged to each criterion using it.
    seconds: f64,
}

fn dataset_specs(root: &Path) -> Vec<DatasetSpec> {
    let lines = |name: &str| DatasetSpec {
        name: name.into(),
        path: root.join(format!("{name}.txt")),
        format: DatasetFormat::LabeledLines,
        test_path: None,
    };
    let split = |name: &str| DatasetSpec {
        name: name.into(),
        path: root.join(name).join("train"),
        format: DatasetFormat::DirPerClass,
        test_path: Some(root.join(name).join("test")),
    };
    vec![
        lines("pl-sh"),
        lines("pl-sub"),
        DatasetSpec {
            name: "pl-2k".into(),
            path: root.join("pl-2k"),
            format: DatasetFormat::DirPerClass,
            test_path: None,
        },
        split("imdb"),
        split("athr"),
        split("xgraph"),
    ]
}

impl DatasetGrid {
    fn load() -> Self {
        let Some(root) = std::env::var_os("CREDWEIGHT_DATA").map(PathBuf::from) else {
            return DatasetGrid {
                outcomes: Err("CREDWEIGHT_DATA is not set; the benchmark datasets are required".into()),
                seconds: 0.0,
            };
        };
        let specs = dataset_specs(&root);
        let missing: Vec<String> = specs
            .iter()
            .flat_map(|s| std::iter::once(&s.path).chain(s.test_path.as_ref()))
            .filter(|p| !p.exists())
            .map(|p| p.display().to_string())
            .collect();
        if !missing.is_empty() {
            return DatasetGrid {
                outcomes: Err(format!("missing under CREDWEIGHT_DATA: {}", missing.join(", "))),
                seconds: 0.0,
            };
        }
        let cells: Vec<CellSpec> = DATASETS
            .iter()
            .flat_map(|d| {
                METHOD_ORDER.iter().map(|&(scheme, order)| CellSpec {
                    dataset: d.to_string(),
                    scheme,
                    order,
                })
            })
            .collect();
        let start = Instant::now();
        let outcomes = run_benchmark(&specs, &cells, &BenchmarkSettings::default());
        let seconds = start.elapsed().as_secs_f64();
        let errors: Vec<String> = outcomes
            .iter()
            .filter_map(|o| {
                o.result
                    .as_ref()
                    .err()
                    .map(|e| format!("{}/{}: {e}", o.cell.dataset, o.cell.method()))
            })
            .collect();
        if !errors.is_empty() {
            return DatasetGrid {
                outcomes: Err(errors.join("; ")),
                seconds,
            };
        }
        DatasetGrid {
            outcomes: Ok(outcomes),
            seconds,
        }
    }
}

fn compare_rows(grid: &DatasetGrid, rows: &[usize]) -> Verdict {
    let outcomes = match &grid.outcomes {
        Ok(o) => o,
        Err(e) => return Verdict::NotEvaluated(e.clone()),
    };
    let mut worst: f64 = 0.0;
    let mut misses = Vec::new();
    for &row in rows {
        let (scheme, order) = METHOD_ORDER[row];
        for (col, dataset) in DATASETS.iter().enumerate() {
            let ours = 100.0 * cell_accuracy(outcomes, dataset, scheme, order).unwrap();
            let published = PUBLISHED[row][col];
            let gap = (ours - published).abs();
            worst = worst.max(gap);
            if gap > TABLE_TOLERANCE {
                misses.push(format!(
                    "{scheme}-{}/{dataset} {ours:.1} vs {published}",
                    order.short_name()
                ));
            }
        }
    }
    check(
        misses.is_empty(),
        format!(
            "max |delta| = {worst:.2} points; outside ±{TABLE_TOLERANCE}: [{}]",
            misses.join(", ")
        ),
    )
}

fn criterion_table_rows(grid: &DatasetGrid) -> Verdict {
    compare_rows(grid, &[0, 1, 2, 3])
}

fn criterion_nbsvm_rows(grid: &DatasetGrid) -> Verdict {
    compare_rows(grid, &[4, 5])
}

fn criterion_ordering(grid: &DatasetGrid) -> Verdict {
    let outcomes = match &grid.outcomes {
        Ok(o) => o,
        Err(e) => return Verdict::NotEvaluated(e.clone()),
    };
    let cells = paired_cells(outcomes, Scheme::CredTfidf, Scheme::Tfidf);
    let wins = cells.iter().filter(|(_, c, t)| c >= t).count();
    let pairs: Vec<(f64, f64)> = cells.iter().map(|&(_, c, t)| (c, t)).collect();
    match wilcoxon_signed_ranks(&pairs) {
        Ok(cmp) => check(
            cells.len() == 12 && wins >= MIN_CRED_WINS && cmp.p_value < WILCOXON_ALPHA && cmp.w_plus > cmp.w_minus,
            format!(
                "cred >= tfidf on {wins}/{} cells; W+={} W-={} p={:.4}",
                cells.len(),
                cmp.w_plus,
                cmp.w_minus,
                cmp.p_value
            ),
        ),
        Err(e) => Verdict::Fail(format!("Wilcoxon test failed: {e}")),
    }
}

// --------------------------------------------------------------- weighting

fn criterion_weighting() -> Verdict {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    for _ in 0..10_000 {
        let (p, n) = (rng.gen_range(0..100_000u64), rng.gen_range(0..100_000u64));
        if p + n == 0 {
            continue;
        }
        let s = raw_score(p, n).unwrap();
        if !(0.5..=1.0).contains(&s) {
            problems.push(format!("raw_score({p}, {n}) = {s}"));
        }
    }

    // per-occurrence scores averaged over every occurrence of the token
    let mut oracle_mismatches = 0;
    for total in 1..=200u64 {
        for p in 0..=total {
            let n = total - p;
            let mut numerator = 0u64;
            for occurrence in 0..total {
                numerator += if occurrence < p { p } else { n };
            }
            let oracle = numerator as f64 / (total * total) as f64;
            if raw_score(p, n).unwrap() != oracle {
                oracle_mismatches += 1;
            }
        }
    }
    if oracle_mismatches > 0 {
        problems.push(format!("{oracle_mismatches} raw_score/oracle mismatches"));
    }

    // |s̄ - ŝ| <= C_i² / (2γ), so the 1e-6 limit applies to C_i <= 40
    for _ in 0..1000 {
        let (p, n) = (rng.gen_range(0..20u64), rng.gen_range(1..=20u64));
        let s_pop = rng.gen_range(0.5..1.0);
        let raw = raw_score(p, n).unwrap();
        if cred_score(p, n, s_pop, 0.0).unwrap() != raw {
            problems.push(format!("gamma=0 differs from raw at ({p}, {n})"));
        }
        let limit = cred_score(p, n, s_pop, 1e9).unwrap();
        if (limit - s_pop).abs() > 1e-6 {
            problems.push(format!("gamma=1e9 gives {limit}, population mean {s_pop}"));
        }
    }

    let train = synthetic_corpus(30, 20, 21);
    let probes = synthetic_corpus(20, 25, 22);
    let vocab = credweight::corpus::build_vocabulary(&train, NgramOrder::Unigram, 1).unwrap();
    let (stats, corpus) = credweight::weighting::build_token_stats(&train, &vocab).unwrap();
    let n_docs = train.len() as f64;
    for scheme in [Scheme::Tfidf, Scheme::CredTfidf] {
        let linear = WeightingConfig {
            scaling: Scaling::None,
            ..WeightingConfig::for_scheme(scheme)
        };
        let weighter = Weighter::fit(&stats, &corpus, linear).unwrap();
        let mut worst: f64 = 0.0;
        for doc in &probes {
            let ours = weighter.vectorize(doc, &vocab);
            // same vector with base-10 idf, normalized independently
            let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
            for id in vocab.ids(&doc.tokens) {
                *counts.entry(id).or_default() += 1.0;
            }
            let raw: Vec<(u32, f64)> = counts
                .iter()
                .map(|(&id, &tf)| {
                    let df = stats.get(id).unwrap().df() as f64;
                    (id, weighter.tf_multiplier(id).unwrap() * tf * (n_docs / df).log10())
                })
                .filter(|&(_, w)| w != 0.0)
                .collect();
            let norm = raw.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
            if ours.len() != raw.len() {
                problems.push("log-base support differs".into());
                continue;
            }
            for ((id, w), (oid, ow)) in ours.entries().iter().zip(&raw) {
                if id != oid {
                    problems.push("log-base ids differ".into());
                }
                worst = worst.max((w - ow / norm).abs());
            }
            if !ours.is_empty() && (ours.norm() - 1.0).abs() > NORM_TOL {
                problems.push(format!("norm {}", ours.norm()));
            }
        }
        if worst > LOG_BASE_TOL {
            problems.push(format!("{scheme}: log-base deviation {worst:e}"));
        }
    }

    for scheme in [Scheme::Tfidf, Scheme::CredTfidf, Scheme::Nbsvm] {
        for scaling in [Scaling::None, Scaling::Log, Scaling::Augmented] {
            let config = WeightingConfig {
                scaling,
                normalize: true,
                ..WeightingConfig::for_scheme(scheme)
            };
            let weighter = Weighter::fit(&stats, &corpus, config).unwrap();
            for doc in &probes {
                let v = weighter.vectorize(doc, &vocab);
                if !v.is_empty() && (v.norm() - 1.0).abs() > NORM_TOL {
                    problems.push(format!("{scheme}/{scaling:?} norm {}", v.norm()));
                }
            }
        }
    }

    let secs = start.elapsed().as_secs_f64();
    if secs >= WEIGHTING_BUDGET_SECS {
        problems.push(format!("took {secs:.1}s"));
    }
    check(
        problems.is_empty(),
        format!("10^4 raw scores, 20100 oracle pairs, gamma limits, log base, unit norms; problems: {problems:?}"),
    )
}

// ------------------------------------------------------------------ solver

struct Instance {
    xs: Vec<SparseVector>,
    ys: Vec<Label>,
    dim: usize,
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(10..=100);
    let dim = rng.gen_range(2..=20);
    let truth: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let mut pairs = Vec::new();
        for j in 0..dim as u32 {
            if rng.gen_bool(0.5) {
                pairs.push((j, rng.gen_range(-1.0..1.0)));
            }
        }
        let x = SparseVector::from_pairs(pairs).unwrap();
        let mut positive = x.dot_dense(&truth) > 0.0;
        if rng.gen_bool(0.1) {
            positive = !positive;
        }
        ys.push(match i {
            0 => Label::Pos,
            1 => Label::Neg,
            _ if positive => Label::Pos,
            _ => Label::Neg,
        });
        xs.push(x);
    }
    Instance { xs, ys, dim }
}

fn separable_instance(rng: &mut ChaCha8Rng) -> Instance {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    while xs.len() < 20 {
        let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let margin = a + 0.5 * b - 0.3;
        if margin.abs() < 0.2 {
            continue;
        }
        xs.push(SparseVector::from_pairs(vec![(0, a), (1, b)]).unwrap());
        ys.push(if margin > 0.0 { Label::Pos } else { Label::Neg });
    }
    Instance { xs, ys, dim: 2 }
}

/// Projected subgradient descent on the primal over `(w, b)` with step
/// `1 / (t + 1)`, projected onto the ball that must contain the optimum,
/// keeping the best objective seen.
fn subgradient_oracle(inst: &Instance, penalty: f64, iterations: usize) -> f64 {
    let n = inst.xs.len();
    let radius = (2.0 * penalty * n as f64).sqrt();
    let mut w = vec![0.0; inst.dim];
    let mut b = 0.0;
    let mut best = f64::INFINITY;
    let mut gw = vec![0.0; inst.dim];
    for t in 0..iterations {
        let mut loss = 0.0;
        gw.copy_from_slice(&w);
        let mut gb = b;
        for (x, y) in inst.xs.iter().zip(&inst.ys) {
            let margin = y.sign() * (x.dot_dense(&w) + b);
            if margin < 1.0 {
                loss += 1.0 - margin;
                for &(j, v) in x.entries() {
                    gw[j as usize] -= penalty * y.sign() * v;
                }
                gb -= penalty * y.sign();
            }
        }
        let objective = 0.5 * (w.iter().map(|v| v * v).sum::<f64>() + b * b) + penalty * loss;
        best = best.min(objective);
        let step = 1.0 / (t as f64 + 1.0);
        for (wj, g) in w.iter_mut().zip(&gw) {
            *wj -= step * g;
        }
        b -= step * gb;
        let norm = (w.iter().map(|v| v * v).sum::<f64>() + b * b).sqrt();
        if norm > radius {
            let shrink = radius / norm;
            w.iter_mut().for_each(|v| *v *= shrink);
            b *= shrink;
        }
    }
    best
}

fn bits(m: &LinearModel) -> (Vec<u64>, u64) {
    (m.weights.iter().map(|w| w.to_bits()).collect(), m.bias.to_bits())
}

fn criterion_solver() -> Verdict {
    let start = Instant::now();
    let tight = TrainConfig {
        tolerance: 1e-10,
        max_epochs: 1_000_000,
        ..TrainConfig::default()
    };
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_gap_ratio: f64 = 0.0;
    let mut worst_flip: f64 = 0.0;

    for k in 0..50 {
        let inst = random_instance(&mut rng);
        let report = train_with_report(&inst.xs, &inst.ys, inst.dim, &tight).unwrap();
        let primal = report.model.objective;
        let allowed = (1e-6 * primal).max(1e-8);
        worst_gap_ratio = worst_gap_ratio.max(report.duality_gap() / allowed);
        if report.duality_gap() > allowed {
            problems.push(format!("instance {k}: gap {:e} > {allowed:e}", report.duality_gap()));
        }
        if report.alpha.iter().any(|&a| !(0.0..=tight.penalty).contains(&a)) {
            problems.push(format!("instance {k}: dual variable outside [0, C]"));
        }
        if report
            .dual_trace
            .windows(2)
            .any(|p| p[1] < p[0] - 1e-12 * p[0].abs().max(1.0))
        {
            problems.push(format!("instance {k}: dual objective decreased"));
        }

        let flipped: Vec<Label> = inst.ys.iter().map(|y| y.flipped()).collect();
        let mirror = train(&inst.xs, &flipped, inst.dim, &tight).unwrap();
        let flip = report
            .model
            .weights
            .iter()
            .zip(&mirror.weights)
            .map(|(a, b)| (a + b).abs())
            .fold((report.model.bias + mirror.bias).abs(), f64::max);
        worst_flip = worst_flip.max(flip);

        let again = train(&inst.xs, &inst.ys, inst.dim, &tight).unwrap();
        if bits(&again) != bits(&report.model) {
            problems.push(format!("instance {k}: rerun not bitwise identical"));
        }
    }
    if worst_flip > FLIP_TOL {
        problems.push(format!("label flip deviation {worst_flip:e}"));
    }

    let mut worst_rel: f64 = 0.0;
    for _ in 0..3 {
        let inst = separable_instance(&mut rng);
        let model = train(&inst.xs, &inst.ys, inst.dim, &tight).unwrap();
        let ours = primal_objective(&model.weights, model.bias, &inst.xs, &inst.ys, tight.penalty);
        let oracle = subgradient_oracle(&inst, tight.penalty, 1_000_000);
        let rel = (ours - oracle).abs() / oracle;
        worst_rel = worst_rel.max(rel);
        if rel > SOLVER_ORACLE_REL_TOL {
            problems.push(format!("objective {ours} vs oracle {oracle} (rel {rel:e})"));
        }
    }

    let secs = start.elapsed().as_secs_f64();
    if secs >= SOLVER_BUDGET_SECS {
        problems.push(format!("took {secs:.1}s"));
    }
    check(
        problems.is_empty(),
        format!(
            "50 instances: worst gap/allowed {worst_gap_ratio:.2e}, worst flip {worst_flip:.1e}; oracle rel {worst_rel:.1e}; problems: {problems:?}"
        ),
    )
}

// ---------------------------------------------------------------- wilcoxon

/// Two-sided exact p-value by enumerating every sign assignment of integer
/// differences.
fn enumerated(diffs: &[i64]) -> (f64, f64, f64) {
    let abs: Vec<i64> = diffs.iter().map(|d| d.abs()).collect();
    // doubled midranks keep everything integral
    let doubled: Vec<u64> = abs
        .iter()
        .map(|a| {
            let below = abs.iter().filter(|b| *b < a).count() as u64;
            let equal = abs.iter().filter(|b| *b == a).count() as u64;
            2 * below + equal + 1
        })
        .collect();
    let w_plus: u64 = diffs
        .iter()
        .zip(&doubled)
        .filter(|(d, _)| **d > 0)
        .map(|(_, r)| r)
        .sum();
    let total: u64 = doubled.iter().sum();
    let w = w_plus.min(total - w_plus);
    let n = diffs.len();
    let mut count = 0u64;
    for mask in 0u64..(1 << n) {
        let t: u64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| doubled[i]).sum();
        if t <= w {
            count += 1;
        }
    }
    let p = ((2 * count) as f64 / (1u64 << n) as f64).min(1.0);
    (w_plus as f64 / 2.0, (total - w_plus) as f64 / 2.0, p)
}

fn criterion_wilcoxon() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut problems = Vec::new();
    let mut checked = 0;
    for n in 1..=12usize {
        for trial in 0..40 {
            // narrow ranges force ties; accuracies in tenths of a point
            let spread = if trial % 2 == 0 { 4 } else { 30 };
            let diffs: Vec<i64> = (0..n)
                .map(|_| loop {
                    let d = rng.gen_range(-spread..=spread);
                    if d != 0 {
                        break d;
                    }
                })
                .collect();
            let pairs: Vec<(f64, f64)> = diffs
                .iter()
                .enumerate()
                .map(|(i, &d)| {
                    let base = 80.0 + i as f64 / 10.0;
                    (base + d as f64 / 10.0, base)
                })
                .collect();
            let ours = wilcoxon_signed_ranks(&pairs).unwrap();
            let (w_plus, w_minus, p) = enumerated(&diffs);
            checked += 1;
            if ours.method != PValueMethod::Exact
                || ours.w_plus != w_plus
                || ours.w_minus != w_minus
                || ours.p_value != p
            {
                problems.push(format!(
                    "n={n} {diffs:?}: ours ({}, {}, {}) vs ({w_plus}, {w_minus}, {p})",
                    ours.w_plus, ours.w_minus, ours.p_value
                ));
            }
        }
    }
    // midrank helper agrees with the enumeration ranks on a tie-heavy case
    if midranks(&[0.3, 0.1, 0.3, 0.2, 0.1]) != vec![4.5, 1.5, 4.5, 3.0, 1.5] {
        problems.push("midranks".into());
    }
    check(
        problems.is_empty(),
        format!("{checked} samples, n = 1..12; mismatches: {problems:?}"),
    )
}

// ----------------------------------------------------------------- leakage

fn snapshot(f: &FittedPipeline) -> (Vec<String>, String, Vec<u64>, (Vec<u64>, u64)) {
    let mut stats = Vec::new();
    f.stats.write_to(&f.corpus_stats, &mut stats).unwrap();
    (
        f.vocabulary.tokens().to_vec(),
        String::from_utf8(stats).unwrap(),
        vec![
            f.corpus_stats.s_bar_pop.to_bits(),
            f.corpus_stats.n_docs,
            f.corpus_stats.total_tokens,
        ],
        bits(&f.model),
    )
}

fn criterion_leakage() -> Verdict {
    const K: usize = 5;
    const SEED: u64 = 17;
    let docs = synthetic_corpus(20, 30, 7);
    assert_eq!(docs.len(), 40);
    let config = PipelineConfig::new(NgramOrder::Bigram, WeightingConfig::for_scheme(Scheme::CredTfidf));
    let splits = stratified_k_fold(&docs, K, SEED).unwrap();
    let fold_tests: Vec<Vec<String>> = splits
        .iter()
        .map(|s| s.test.iter().map(|d| d.id.clone()).collect())
        .collect();
    let fold_trains: Vec<Vec<String>> = splits
        .iter()
        .map(|s| s.train.iter().map(|d| d.id.clone()).collect())
        .collect();

    let perturb = |docs: &[Document], id: &str| -> Vec<Document> {
        docs.iter()
            .map(|d| {
                if d.id == id {
                    let mut tokens: Vec<String> = d.tokens.iter().rev().cloned().collect();
                    tokens.extend(["never-seen", "good1", "good1", "bad2"].map(String::from));
                    Document::new(d.id.clone(), d.label, tokens)
                } else {
                    d.clone()
                }
            })
            .collect()
    };

    let mut checked = 0;
    let mut leaks = Vec::new();
    for (fold, tests) in fold_tests.iter().enumerate() {
        let base = snapshot(&fit_cv_fold(&docs, K, fold, &config, SEED).unwrap());
        for id in tests {
            let changed = fit_cv_fold(&perturb(&docs, id), K, fold, &config, SEED).unwrap();
            checked += 1;
            if snapshot(&changed) != base {
                leaks.push(format!("fold {fold}, {id}"));
            }
        }
    }
    // control: the same perturbation of a training document is visible
    let control = fit_cv_fold(&perturb(&docs, &fold_trains[0][0]), K, 0, &config, SEED).unwrap();
    let control_visible = snapshot(&control) != snapshot(&fit_cv_fold(&docs, K, 0, &config, SEED).unwrap());
    check(
        leaks.is_empty() && control_visible,
        format!("{checked} test-document perturbations over {K} folds; leaks: {leaks:?}; training perturbation visible: {control_visible}"),
    )
}
