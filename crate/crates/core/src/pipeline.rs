//! End-to-end flows: clean → select → split → scale → train → evaluate.
//!
//! The CLI subcommands are thin wrappers over these functions, and tests
//! drive them directly. Benchmarks train the three classifiers on one
//! shared split so the comparison is paired, and may do so concurrently —
//! inputs are immutable and results are collected in a fixed order, so
//! output is deterministic regardless of scheduling.

use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::classifier::{
    Algo, Hyperparams, ModelError, ModelKind, ModelMeta, TrainedModel, logistic, scaled_accuracy,
    svm, tree,
};
use crate::eval::{ConfusionMatrix, EvalError, EvalReport, Scoreboard};
use crate::flow::{Dataset, FlowError};
use crate::preprocess::{
    FeatureMatrix, PreprocessError, SplitConfig, apply_scaler, clean, fit_scaler, select_features,
    train_test_split,
};
use crate::scalar::Scalar;
use crate::synth::SynthError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("dataset lacks feature `{feature}` required by the model")]
    ModelDataMismatch { feature: String },
}

/// A freshly trained model plus the run's bookkeeping.
#[derive(Debug, Clone)]
pub struct TrainOutcome<F> {
    pub model: TrainedModel<F>,
    /// Records dropped by cleaning.
    pub removed: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub training_accuracy: F,
}

fn train_kind<F: Scalar>(
    algo: Algo,
    train_scaled: &FeatureMatrix<F>,
    hyper: &Hyperparams<F>,
) -> Result<ModelKind<F>, ModelError> {
    Ok(match algo {
        Algo::Logistic => ModelKind::Logistic(logistic::train(train_scaled, &hyper.logistic)?),
        Algo::Svm => ModelKind::Svm(svm::train(train_scaled, &hyper.svm)?),
        Algo::Tree => ModelKind::Tree(tree::train(train_scaled, &hyper.tree)?),
    })
}

/// Trains one classifier: clean → select → split → fit scaler on the
/// training half → standardize → fit. The returned model records features,
/// scaler and split settings so the evaluation is reproducible.
pub fn train_pipeline<F: Scalar, S: AsRef<str>>(
    ds: &Dataset,
    algo: Algo,
    features: &[S],
    split: &SplitConfig,
    hyper: &Hyperparams<F>,
) -> Result<TrainOutcome<F>, PipelineError> {
    hyper.validate()?;
    let cleaned = clean(ds)?;
    let matrix = select_features::<F, S>(&cleaned.dataset, features)?;
    let (train_raw, test_raw) = train_test_split(&matrix, split)?;
    let scaler = fit_scaler(&train_raw);
    let train_scaled = apply_scaler(&scaler, &train_raw)?;
    let kind = train_kind(algo, &train_scaled, hyper)?;
    let training_accuracy = scaled_accuracy(&kind, &train_scaled)?;
    Ok(TrainOutcome {
        model: TrainedModel {
            meta: ModelMeta {
                feature_names: matrix.feature_names().to_vec(),
                scaler,
                split: *split,
            },
            kind,
        },
        removed: cleaned.removed,
        train_rows: train_scaled.n_rows(),
        test_rows: test_raw.n_rows(),
        training_accuracy,
    })
}

/// Which rows of a dataset an evaluation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalSubset {
    /// Re-derive the model's recorded split and use the held-out test half
    /// (the default: evaluating the training file reproduces the benchmark
    /// row for this model).
    #[default]
    Test,
    /// The training half of the recorded split.
    Train,
    /// Every row.
    All,
}

impl EvalSubset {
    pub fn parse(text: &str) -> Option<EvalSubset> {
        match text.trim().to_ascii_lowercase().as_str() {
            "test" => Some(EvalSubset::Test),
            "train" => Some(EvalSubset::Train),
            "all" => Some(EvalSubset::All),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalOutcome<F> {
    pub confusion: ConfusionMatrix,
    pub report: EvalReport<F>,
    /// Rows actually evaluated (after cleaning and subsetting).
    pub rows: usize,
    pub removed: usize,
}

/// Evaluates a model on a dataset using the features, scaler and split
/// stored in the model.
pub fn evaluate_pipeline<F: Scalar>(
    model: &TrainedModel<F>,
    ds: &Dataset,
    subset: EvalSubset,
) -> Result<EvalOutcome<F>, PipelineError> {
    let cleaned = clean(ds)?;
    let matrix = select_features::<F, String>(&cleaned.dataset, &model.meta.feature_names)
        .map_err(|e| match e {
            PreprocessError::UnknownFeature(feature) => {
                PipelineError::ModelDataMismatch { feature }
            }
            other => PipelineError::from(other),
        })?;
    let part = match subset {
        EvalSubset::All => matrix,
        EvalSubset::Test => train_test_split(&matrix, &model.meta.split)?.1,
        EvalSubset::Train => train_test_split(&matrix, &model.meta.split)?.0,
    };
    let predictions = model.predict_matrix(&part)?;
    let confusion = ConfusionMatrix::from_labels(part.labels(), &predictions)?;
    let report = confusion.report(model.kind.algo().display_name())?;
    Ok(EvalOutcome {
        confusion,
        report,
        rows: part.n_rows(),
        removed: cleaned.removed,
    })
}

/// One benchmark row: the trained model's evaluation plus its training
/// wall time (monotonic clock; never part of CSV output).
#[derive(Debug, Clone)]
pub struct BenchEntry<F> {
    pub algo: Algo,
    pub report: EvalReport<F>,
    pub confusion: ConfusionMatrix,
    pub training_accuracy: F,
    pub train_time: Duration,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome<F> {
    /// In [`Algo::ALL`] order.
    pub entries: Vec<BenchEntry<F>>,
    pub scoreboard: Scoreboard<F>,
    pub removed: usize,
    pub train_rows: usize,
    pub test_rows: usize,
}

/// Trains all three classifiers on the same training half and evaluates
/// them on the same held-out half. Training runs on one thread per
/// classifier.
pub fn bench_pipeline<F: Scalar, S: AsRef<str> + Sync>(
    ds: &Dataset,
    features: &[S],
    split: &SplitConfig,
    hyper: &Hyperparams<F>,
) -> Result<BenchOutcome<F>, PipelineError> {
    hyper.validate()?;
    let cleaned = clean(ds)?;
    let matrix = select_features::<F, S>(&cleaned.dataset, features)?;
    let (train_raw, test_raw) = train_test_split(&matrix, split)?;
    let scaler = fit_scaler(&train_raw);
    let train_scaled = apply_scaler(&scaler, &train_raw)?;
    let test_scaled = apply_scaler(&scaler, &test_raw)?;

    let trained: Vec<Result<(ModelKind<F>, Duration), ModelError>> = thread::scope(|scope| {
        let handles: Vec<_> = Algo::ALL
            .into_iter()
            .map(|algo| {
                let train_ref = &train_scaled;
                scope.spawn(move || {
                    let start = Instant::now();
                    let kind = train_kind(algo, train_ref, hyper)?;
                    Ok((kind, start.elapsed()))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("training thread panicked"))
            .collect()
    });

    let mut entries = Vec::with_capacity(Algo::ALL.len());
    for (algo, outcome) in Algo::ALL.into_iter().zip(trained) {
        let (kind, train_time) = outcome?;
        let training_accuracy = scaled_accuracy(&kind, &train_scaled)?;
        let predictions: Vec<_> = test_scaled
            .rows()
            .map(|row| kind.predict_scaled(row))
            .collect::<Result<_, _>>()?;
        let confusion = ConfusionMatrix::from_labels(test_scaled.labels(), &predictions)?;
        let report = confusion.report(algo.display_name())?;
        entries.push(BenchEntry {
            algo,
            report,
            confusion,
            training_accuracy,
            train_time,
        });
    }

    let reports: Vec<EvalReport<F>> = entries.iter().map(|e| e.report.clone()).collect();
    let scoreboard = Scoreboard::new(&reports)?;
    Ok(BenchOutcome {
        entries,
        scoreboard,
        removed: cleaned.removed,
        train_rows: train_scaled.n_rows(),
        test_rows: test_scaled.n_rows(),
    })
}
