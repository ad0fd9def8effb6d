//! Acceptance suite: one test per release criterion, library and binary
//! together. Each test prints `test criterion_N_… ok` on success, one line
//! per criterion.
//!
//! Criterion 7 (real-data benchmark) needs a user-supplied CICIDS2017
//! DDoS-day CSV; point `FLOWSIEVE_CIC_CSV` at it to activate that check,
//! otherwise the test reports itself as skipped and passes vacuously.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use flowsieve::classifier::logistic::{nll_gradient, nll_loss, sigmoid};
use flowsieve::classifier::tree::gini;
use flowsieve::classifier::{Algo, Hyperparams, ModelKind, artifact, scaled_accuracy};
use flowsieve::eval::ConfusionMatrix;
use flowsieve::flow::io::{ColumnMap, parse_flow_csv, write_flow_csv};
use flowsieve::flow::{FeatureId, Label, summarize};
use flowsieve::pipeline::{bench_pipeline, train_pipeline};
use flowsieve::preprocess::{
    FeatureMatrix, SplitConfig, apply_scaler, fit_scaler, train_test_split,
};
use flowsieve::synth::{SynthConfig, generate, generate_separable};

fn flowsieve(args: &[&str], dir: &Path) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_flowsieve"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn cm(bb: u64, bd: u64, db: u64, dd: u64) -> ConfusionMatrix {
    ConfusionMatrix {
        benign_benign: bb,
        benign_ddos: bd,
        ddos_benign: db,
        ddos_ddos: dd,
    }
}

/// Criterion 1 — formula unit suite, exact arithmetic. Runtime < 1 s.
#[test]
fn criterion_1_formula_unit_suite() {
    // Probability at score zero is exactly one half.
    assert_eq!(sigmoid(0.0_f64), 0.5);
    assert_eq!(sigmoid(0.0_f32), 0.5);

    // Rate formulas on hand-built confusion matrices, checked against
    // exact rational arithmetic.
    let cases: [(ConfusionMatrix, Ratio<u64>, Ratio<u64>); 3] = [
        (cm(99, 1, 45, 955), Ratio::new(1, 100), Ratio::new(45, 1000)),
        (cm(98, 2, 4, 96), Ratio::new(2, 100), Ratio::new(4, 100)),
        (cm(70, 0, 0, 30), Ratio::new(0, 70), Ratio::new(0, 30)),
    ];
    for (matrix, fp_exact, fn_exact) in cases {
        let fp: f64 = matrix.fp_rate().unwrap();
        let fn_: f64 = matrix.fn_rate().unwrap();
        assert_eq!(fp, fp_exact.to_f64().unwrap());
        assert_eq!(fn_, fn_exact.to_f64().unwrap());
    }
    assert_eq!(cm(99, 1, 45, 955).fp_rate::<f64>().unwrap(), 0.01);
    assert_eq!(cm(99, 1, 45, 955).fn_rate::<f64>().unwrap(), 0.045);
    let accuracy: f64 = cm(98, 2, 4, 96).accuracy().unwrap();
    assert_eq!(accuracy, Ratio::<u64>::new(194, 200).to_f64().unwrap());
    assert_eq!(accuracy, 0.97);

    // Gini impurity at the two reference points.
    assert_eq!(gini::<f64>([50, 50]), 0.5);
    assert_eq!(gini::<f64>([31, 0]), 0.0);
    assert_eq!(gini::<f64>([0, 8]), 0.0);
}

/// Criterion 2 — analytic gradient vs central finite differences at 20
/// random points, relative error < 1e-5. Runtime < 1 s.
#[test]
fn criterion_2_gradient_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let n = 60;
    let k = 4;
    let mut data = Vec::with_capacity(n * k);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        for _ in 0..k {
            data.push(rng.random_range(-3.0..3.0));
        }
        labels.push(if i % 3 == 0 {
            Label::Ddos
        } else {
            Label::Benign
        });
    }
    let m = FeatureMatrix::new(data, labels, (0..k).map(|j| format!("f{j}")).collect()).unwrap();

    let l2 = 1e-3;
    let h = 1e-5;
    for point in 0..20 {
        let intercept: f64 = rng.random_range(-2.0..2.0);
        let coef: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (g0, g) = nll_gradient(&m, intercept, &coef, l2);

        let mut analytic = vec![g0];
        analytic.extend_from_slice(&g);
        let mut numeric = Vec::with_capacity(k + 1);
        numeric.push(
            (nll_loss(&m, intercept + h, &coef, l2) - nll_loss(&m, intercept - h, &coef, l2))
                / (2.0 * h),
        );
        for j in 0..k {
            let mut plus = coef.clone();
            let mut minus = coef.clone();
            plus[j] += h;
            minus[j] -= h;
            numeric.push(
                (nll_loss(&m, intercept, &plus, l2) - nll_loss(&m, intercept, &minus, l2))
                    / (2.0 * h),
            );
        }

        let diff: f64 = analytic
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-8);
        assert!(
            diff / scale < 1e-5,
            "point {point}: relative gradient error {} ≥ 1e-5",
            diff / scale
        );
    }
}

/// Criterion 3 — confusion counts and every metric on 1000 random pairs
/// match an independent naive tally bit-for-bit. Runtime < 1 s.
#[test]
fn criterion_3_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let draw = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.55) {
            Label::Benign
        } else {
            Label::Ddos
        }
    };
    let truth: Vec<Label> = (0..1000).map(|_| draw(&mut rng)).collect();
    let pred: Vec<Label> = (0..1000).map(|_| draw(&mut rng)).collect();

    let matrix = ConfusionMatrix::from_labels(&truth, &pred).unwrap();
    let report = matrix.report::<f64>("oracle").unwrap();

    // Naive second pass.
    let (mut bb, mut bd, mut db, mut dd) = (0u64, 0u64, 0u64, 0u64);
    for (&t, &p) in truth.iter().zip(&pred) {
        match (t, p) {
            (Label::Benign, Label::Benign) => bb += 1,
            (Label::Benign, Label::Ddos) => bd += 1,
            (Label::Ddos, Label::Benign) => db += 1,
            (Label::Ddos, Label::Ddos) => dd += 1,
        }
    }
    assert_eq!(
        (
            matrix.benign_benign,
            matrix.benign_ddos,
            matrix.ddos_benign,
            matrix.ddos_ddos
        ),
        (bb, bd, db, dd)
    );

    // Metrics recomputed from the tally with the documented formulas.
    let n = (bb + bd + db + dd) as f64;
    let accuracy = (bb + dd) as f64 / n;
    let precision_b = bb as f64 / (bb + db) as f64;
    let recall_b = bb as f64 / (bb + bd) as f64;
    let f1_b = 2.0 * precision_b * recall_b / (precision_b + recall_b);
    let precision_d = dd as f64 / (dd + bd) as f64;
    let recall_d = dd as f64 / (dd + db) as f64;
    let f1_d = 2.0 * precision_d * recall_d / (precision_d + recall_d);
    let support_b = (bb + bd) as f64;
    let support_d = (db + dd) as f64;

    assert_eq!(report.accuracy, accuracy);
    assert_eq!(
        report.precision,
        Some((support_b * precision_b + support_d * precision_d) / n)
    );
    assert_eq!(
        report.recall,
        Some((support_b * recall_b + support_d * recall_d) / n)
    );
    assert_eq!(report.f1, Some((support_b * f1_b + support_d * f1_d) / n));
    assert_eq!(report.fp_rate, Some(bd as f64 / (bd + bb) as f64));
    assert_eq!(report.fn_rate, Some(db as f64 / (db + dd) as f64));
}

/// Criterion 4 — separable fixture: SVM and tree reach training accuracy
/// 1.0; all three reach test accuracy ≥ 0.99. Runtime < 5 s.
#[test]
fn criterion_4_separable_fixture_suite() {
    let blobs = generate_separable::<f64>(100, 2.0, 1).unwrap();

    // The witness hyperplane must be perfect before the fixture is used.
    let witness_correct = blobs
        .matrix
        .rows()
        .zip(blobs.matrix.labels())
        .filter(|(row, label)| {
            let decision: f64 = row
                .iter()
                .zip(&blobs.witness_weights)
                .map(|(&x, &w)| x * w)
                .sum::<f64>()
                + blobs.witness_bias;
            (decision > 0.0) == (**label == Label::Ddos)
        })
        .count();
    assert_eq!(witness_correct, blobs.matrix.n_rows());

    let split = SplitConfig::default();
    let (train_raw, test_raw) = train_test_split(&blobs.matrix, &split).unwrap();
    let scaler = fit_scaler(&train_raw);
    let train = apply_scaler(&scaler, &train_raw).unwrap();
    let test = apply_scaler(&scaler, &test_raw).unwrap();
    let hyper = Hyperparams::<f64>::default();

    for algo in Algo::ALL {
        let kind = match algo {
            Algo::Logistic => ModelKind::Logistic(
                flowsieve::classifier::logistic::train(&train, &hyper.logistic).unwrap(),
            ),
            Algo::Svm => {
                ModelKind::Svm(flowsieve::classifier::svm::train(&train, &hyper.svm).unwrap())
            }
            Algo::Tree => {
                ModelKind::Tree(flowsieve::classifier::tree::train(&train, &hyper.tree).unwrap())
            }
        };
        let train_accuracy = scaled_accuracy(&kind, &train).unwrap();
        let test_accuracy = scaled_accuracy(&kind, &test).unwrap();
        if matches!(algo, Algo::Svm | Algo::Tree) {
            assert_eq!(train_accuracy, 1.0, "{algo:?} training accuracy");
        }
        assert!(
            test_accuracy >= 0.99,
            "{algo:?} test accuracy {test_accuracy} below 0.99"
        );
    }
}

/// Criterion 5 — on the default synthetic dataset the attack class varies
/// strictly less than the benign class on all four default features, and
/// `inspect` reports variance ratios > 1. Runtime < 5 s.
#[test]
fn criterion_5_variance_contrast() {
    let ds = generate(&SynthConfig::default()).unwrap();
    assert_eq!(ds.class_counts(), [1000, 1000]);
    let stats = summarize::<f64>(&ds).unwrap();
    let benign = stats.class(Label::Benign).unwrap();
    let ddos = stats.class(Label::Ddos).unwrap();
    for feature in FeatureId::DEFAULT {
        let b = benign.feature(feature).std;
        let d = ddos.feature(feature).std;
        assert!(
            d < b,
            "{feature}: DDoS std {d} not strictly below benign {b}"
        );
    }

    // The CLI view of the same contrast.
    let dir = TempDir::new().unwrap();
    flowsieve(
        &[
            "synth",
            "--n-benign",
            "1000",
            "--n-ddos",
            "1000",
            "--out",
            "d.csv",
        ],
        dir.path(),
    );
    let out = flowsieve(&["inspect", "--data", "d.csv"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    let ratio_section: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("variance ratio"))
        .skip(1)
        .collect();
    assert!(
        !ratio_section.is_empty(),
        "no variance ratio section:\n{text}"
    );
    for feature in FeatureId::DEFAULT {
        let line = ratio_section
            .iter()
            .find(|l| l.trim_start().starts_with(feature.name()))
            .unwrap_or_else(|| panic!("no ratio line for {feature}:\n{text}"));
        let value: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(value > 1.0, "{feature} ratio {value} not above 1");
    }
}

/// Criterion 6 — `bench` run twice with identical flags produces
/// byte-identical scoreboard CSVs. Runtime < 30 s.
#[test]
fn criterion_6_bench_determinism() {
    let dir = TempDir::new().unwrap();
    flowsieve(
        &[
            "synth",
            "--n-benign",
            "400",
            "--n-ddos",
            "400",
            "--seed",
            "13",
            "--out",
            "d.csv",
        ],
        dir.path(),
    );
    for name in ["a.csv", "b.csv"] {
        flowsieve(
            &["bench", "--data", "d.csv", "--seed", "5", "--out", name],
            dir.path(),
        );
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

/// Criterion 7 (optional) — on a user-supplied CICIDS2017 DDoS-day CSV,
/// the benchmark reaches SVM accuracy ≥ 0.95 with SVM strictly above
/// logistic regression. Activates when `FLOWSIEVE_CIC_CSV` points at the
/// file; without it the criterion is reported as skipped. Runtime budget
/// < 10 min for ≤ 500k flows.
#[test]
fn criterion_7_real_data_target() {
    let Ok(path) = std::env::var("FLOWSIEVE_CIC_CSV") else {
        eprintln!("criterion 7 skipped: set FLOWSIEVE_CIC_CSV to a CICIDS2017 DDoS-day flow CSV");
        return;
    };
    let file = fs::File::open(&path).expect("dataset opens");
    let report = parse_flow_csv(file, &path, &ColumnMap::default()).expect("dataset parses");
    let features: Vec<String> = FeatureId::DEFAULT
        .iter()
        .map(|f| f.name().to_string())
        .collect();
    let outcome = bench_pipeline(
        &report.dataset,
        &features,
        &SplitConfig::default(),
        &Hyperparams::<f64>::default(),
    )
    .expect("benchmark runs");

    let accuracy = |algo: Algo| -> f64 {
        outcome
            .entries
            .iter()
            .find(|e| e.algo == algo)
            .unwrap()
            .report
            .accuracy
    };
    let svm = accuracy(Algo::Svm);
    let logistic = accuracy(Algo::Logistic);
    assert!(svm >= 0.95, "SVM accuracy {svm} below 0.95");
    assert!(
        svm > logistic,
        "SVM accuracy {svm} not above logistic regression {logistic}"
    );
}

/// Criterion 8 — model save/load preserves predictions on 1000 random
/// vectors exactly, and the dataset CSV writer round-trips. Runtime < 5 s.
#[test]
fn criterion_8_round_trips() {
    let ds = generate(&SynthConfig {
        n_benign: 200,
        n_ddos: 200,
        seed: 8,
        ..SynthConfig::default()
    })
    .unwrap();

    // Dataset CSV write → read is the identity.
    let mut buf = Vec::new();
    write_flow_csv(&mut buf, &ds).unwrap();
    let reparsed = parse_flow_csv(buf.as_slice(), &ds.source_name, &ColumnMap::default()).unwrap();
    assert!(reparsed.rejected.is_empty());
    assert_eq!(reparsed.dataset, ds);

    // Save → load preserves predictions exactly for all three model kinds.
    let features: Vec<String> = FeatureId::DEFAULT
        .iter()
        .map(|f| f.name().to_string())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for algo in Algo::ALL {
        let trained = train_pipeline(
            &ds,
            algo,
            &features,
            &SplitConfig::default(),
            &Hyperparams::<f64>::default(),
        )
        .unwrap();
        let mut text = Vec::new();
        artifact::save_model(&trained.model, &mut text).unwrap();
        let loaded = artifact::load_model::<f64, _>(text.as_slice()).unwrap();
        assert_eq!(loaded, trained.model);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-2e4..2e4)).collect();
            assert_eq!(
                trained.model.predict(&x).unwrap(),
                loaded.predict(&x).unwrap(),
                "{algo:?} prediction changed after round trip"
            );
        }
    }
}
