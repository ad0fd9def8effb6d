//! flowsieve: DDoS detection over network-flow feature records.
//!
//! The crate ingests CICFlowMeter-style CSV exports, standardizes a chosen
//! feature subset, trains three from-scratch classifiers (logistic
//! regression, a linear hinge-loss SVM and a Gini decision tree) on a
//! deterministic stratified split, and scores them with the full
//! confusion-matrix metric set (accuracy, precision, recall, F1,
//! false-positive and false-negative rates).
//!
//! All numeric code is generic over the [`Scalar`] floating-point type;
//! the `*F64` aliases below pin the default `f64` pipeline used by the
//! CLI. A seeded synthetic generator ([`synth`]) produces datasets with
//! the telltale low-variance attack signature so the whole pipeline is
//! testable without a flow corpus.

pub mod classifier;
pub mod eval;
pub mod flow;
pub mod pipeline;
pub mod preprocess;
pub mod scalar;
pub mod synth;

pub use classifier::{Algo, Hyperparams, ModelError, ModelKind, ModelMeta, TrainedModel};
pub use eval::{ConfusionMatrix, EvalError, EvalReport, Scoreboard};
pub use flow::{Dataset, FeatureId, FlowError, FlowRecord, Label, SummaryStats};
pub use pipeline::{EvalSubset, PipelineError};
pub use preprocess::{FeatureMatrix, PreprocessError, Scaler, SplitConfig};
pub use scalar::Scalar;
pub use synth::{SynthConfig, SynthError};

/// Concrete `f64` aliases for the default pipeline.
pub type FeatureMatrixF64 = preprocess::FeatureMatrix<f64>;
pub type ScalerF64 = preprocess::Scaler<f64>;
pub type HyperparamsF64 = classifier::Hyperparams<f64>;
pub type TrainedModelF64 = classifier::TrainedModel<f64>;
pub type LogisticModelF64 = classifier::LogisticModel<f64>;
pub type SvmModelF64 = classifier::SvmModel<f64>;
pub type TreeModelF64 = classifier::TreeModel<f64>;
pub type EvalReportF64 = eval::EvalReport<f64>;
pub type ScoreboardF64 = eval::Scoreboard<f64>;
pub type SummaryStatsF64 = flow::SummaryStats<f64>;
