//! The three from-scratch classifiers behind one train/predict contract,
//! plus the versioned model-artifact format.
//!
//! Training operates on an already-standardized [`FeatureMatrix`]; a
//! [`TrainedModel`] carries the scaler and feature list from training and
//! applies them internally, so prediction always takes raw feature vectors.

use thiserror::Error;

use crate::flow::Label;
use crate::preprocess::{FeatureMatrix, Scaler, SplitConfig};
use crate::scalar::Scalar;

pub mod artifact;
pub mod logistic;
pub mod svm;
pub mod tree;

pub use logistic::{LogisticModel, LogisticParams};
pub use svm::{SvmModel, SvmParams};
pub use tree::{TreeModel, TreeParams};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dimension mismatch: model expects {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("training data contains a single class ({0})")]
    SingleClass(Label),
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparam(String),
    #[error("unsupported model format version {found} (this build reads v{supported})")]
    UnsupportedVersion { found: u32, supported: u32 },
    #[error("corrupt model file at line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Hyperparameters for all three algorithms. Defaults are recorded into
/// every saved model so an evaluation can be reproduced exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams<F> {
    pub logistic: LogisticParams<F>,
    pub svm: SvmParams<F>,
    pub tree: TreeParams,
}

impl<F: Scalar> Default for Hyperparams<F> {
    fn default() -> Hyperparams<F> {
        Hyperparams {
            logistic: LogisticParams::default(),
            svm: SvmParams::default(),
            tree: TreeParams::default(),
        }
    }
}

impl<F: Scalar> Hyperparams<F> {
    pub fn validate(&self) -> Result<(), ModelError> {
        self.logistic.validate()?;
        self.svm.validate()?;
        self.tree.validate()
    }
}

/// Which algorithm a model or training run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Logistic,
    Svm,
    Tree,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::Logistic, Algo::Svm, Algo::Tree];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Logistic => "logistic",
            Algo::Svm => "svm",
            Algo::Tree => "tree",
        }
    }

    /// Human-readable classifier name used in scoreboards.
    pub fn display_name(self) -> &'static str {
        match self {
            Algo::Logistic => "logistic_regression",
            Algo::Svm => "svm",
            Algo::Tree => "decision_tree",
        }
    }

    pub fn parse(name: &str) -> Option<Algo> {
        match name.trim().to_ascii_lowercase().as_str() {
            "logistic" | "logistic_regression" | "lr" => Some(Algo::Logistic),
            "svm" => Some(Algo::Svm),
            "tree" | "decision_tree" | "dt" => Some(Algo::Tree),
            _ => None,
        }
    }
}

/// Training provenance stored alongside the parameters: the selected
/// features, the scaler fit on the training half, and the split settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta<F> {
    pub feature_names: Vec<String>,
    pub scaler: Scaler<F>,
    pub split: SplitConfig,
}

/// Algorithm-specific parameters of a trained model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind<F> {
    Logistic(LogisticModel<F>),
    Svm(SvmModel<F>),
    Tree(TreeModel<F>),
}

impl<F: Scalar> ModelKind<F> {
    pub fn algo(&self) -> Algo {
        match self {
            ModelKind::Logistic(_) => Algo::Logistic,
            ModelKind::Svm(_) => Algo::Svm,
            ModelKind::Tree(_) => Algo::Tree,
        }
    }

    /// Predicts in the standardized feature space.
    pub fn predict_scaled(&self, x: &[F]) -> Result<Label, ModelError> {
        match self {
            ModelKind::Logistic(m) => m.predict(x),
            ModelKind::Svm(m) => m.predict(x),
            ModelKind::Tree(m) => m.predict(x),
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            ModelKind::Logistic(m) => m.coefficients.len(),
            ModelKind::Svm(m) => m.weights.len(),
            ModelKind::Tree(m) => m.n_features(),
        }
    }
}

/// A trained classifier plus everything needed to reproduce its
/// preprocessing. Immutable and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel<F> {
    pub meta: ModelMeta<F>,
    pub kind: ModelKind<F>,
}

impl<F: Scalar> TrainedModel<F> {
    /// Classifies one raw (unscaled) feature vector. The stored scaler is
    /// applied internally.
    pub fn predict(&self, raw: &[F]) -> Result<Label, ModelError> {
        let expected = self.meta.feature_names.len();
        if raw.len() != expected {
            return Err(ModelError::DimensionMismatch {
                expected,
                found: raw.len(),
            });
        }
        let scaled =
            self.meta
                .scaler
                .transform_row(raw)
                .map_err(|_| ModelError::DimensionMismatch {
                    expected,
                    found: raw.len(),
                })?;
        self.kind.predict_scaled(&scaled)
    }

    /// Predicts every row of a raw (unscaled) matrix.
    pub fn predict_matrix(&self, m: &FeatureMatrix<F>) -> Result<Vec<Label>, ModelError> {
        m.rows().map(|row| self.predict(row)).collect()
    }
}

/// Training accuracy of a kind-level model on the (scaled) matrix it was
/// fit to.
pub fn scaled_accuracy<F: Scalar>(
    kind: &ModelKind<F>,
    m: &FeatureMatrix<F>,
) -> Result<F, ModelError> {
    let mut correct = 0usize;
    for (row, &truth) in m.rows().zip(m.labels()) {
        if kind.predict_scaled(row)? == truth {
            correct += 1;
        }
    }
    Ok(F::from_usize(correct).unwrap() / F::from_usize(m.n_rows()).unwrap())
}
