//! Confusion-matrix construction and the detection metrics: accuracy,
//! precision, recall, F1, false-positive rate and false-negative rate.
//!
//! Rates follow the binary definitions
//! `fp = benign_ddos / (benign_ddos + benign_benign)` and
//! `fn = ddos_benign / (ddos_benign + ddos_ddos)`. Precision, recall and
//! F1 are computed per class and combined by support-weighted averaging;
//! any quantity whose denominator is zero is reported as undefined
//! (`None`), never as a silent zero.

use std::fmt::Write as _;

use thiserror::Error;

use crate::flow::Label;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("label sequences differ in length: {truth} truths vs {predictions} predictions")]
    LengthMismatch { truth: usize, predictions: usize },
    #[error("no samples to evaluate")]
    Empty,
    #[error("no benign samples: the false-positive rate is undefined")]
    NoBenignSamples,
    #[error("no attack samples: the false-negative rate is undefined")]
    NoAttackSamples,
}

/// The four truth × prediction counts of the binary problem. Field names
/// read `<truth>_<prediction>`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    /// Benign flows classified benign (true negatives).
    pub benign_benign: u64,
    /// Benign flows classified as attacks (false positives).
    pub benign_ddos: u64,
    /// Attacks classified benign (false negatives, the costly kind).
    pub ddos_benign: u64,
    /// Attacks classified as attacks (true positives).
    pub ddos_ddos: u64,
}

/// Per-class precision/recall/F1 with the class's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics<F> {
    pub label: Label,
    /// Number of samples whose true class is `label`.
    pub support: u64,
    pub precision: Option<F>,
    pub recall: Option<F>,
    pub f1: Option<F>,
}

/// One scoreboard row: every metric for one classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<F> {
    pub classifier: String,
    pub accuracy: F,
    pub precision: Option<F>,
    pub recall: Option<F>,
    pub f1: Option<F>,
    pub fp_rate: Option<F>,
    pub fn_rate: Option<F>,
}

fn ratio<F: Scalar>(numerator: u64, denominator: u64) -> Option<F> {
    if denominator == 0 {
        None
    } else {
        Some(F::from_u64(numerator).unwrap() / F::from_u64(denominator).unwrap())
    }
}

impl ConfusionMatrix {
    /// Tallies truth/prediction pairs. The four counts partition the pairs.
    pub fn from_labels(truth: &[Label], pred: &[Label]) -> Result<ConfusionMatrix, EvalError> {
        if truth.len() != pred.len() {
            return Err(EvalError::LengthMismatch {
                truth: truth.len(),
                predictions: pred.len(),
            });
        }
        if truth.is_empty() {
            return Err(EvalError::Empty);
        }
        let mut cm = ConfusionMatrix::default();
        for (&t, &p) in truth.iter().zip(pred) {
            match (t, p) {
                (Label::Benign, Label::Benign) => cm.benign_benign += 1,
                (Label::Benign, Label::Ddos) => cm.benign_ddos += 1,
                (Label::Ddos, Label::Benign) => cm.ddos_benign += 1,
                (Label::Ddos, Label::Ddos) => cm.ddos_ddos += 1,
            }
        }
        Ok(cm)
    }

    pub fn total(&self) -> u64 {
        self.benign_benign + self.benign_ddos + self.ddos_benign + self.ddos_ddos
    }

    /// Fraction of correctly classified samples.
    pub fn accuracy<F: Scalar>(&self) -> Result<F, EvalError> {
        ratio(self.benign_benign + self.ddos_ddos, self.total()).ok_or(EvalError::Empty)
    }

    /// Fraction of benign flows flagged as attacks.
    pub fn fp_rate<F: Scalar>(&self) -> Result<F, EvalError> {
        ratio(self.benign_ddos, self.benign_ddos + self.benign_benign)
            .ok_or(EvalError::NoBenignSamples)
    }

    /// Fraction of attacks missed (classified benign).
    pub fn fn_rate<F: Scalar>(&self) -> Result<F, EvalError> {
        ratio(self.ddos_benign, self.ddos_benign + self.ddos_ddos).ok_or(EvalError::NoAttackSamples)
    }

    /// Precision/recall/F1 treating `label` as the positive class. F1 is 0
    /// when precision and recall are both defined but sum to zero.
    pub fn class_metrics<F: Scalar>(&self, label: Label) -> ClassMetrics<F> {
        let (tp, fp, fn_) = match label {
            Label::Ddos => (self.ddos_ddos, self.benign_ddos, self.ddos_benign),
            Label::Benign => (self.benign_benign, self.ddos_benign, self.benign_ddos),
        };
        let support = tp + fn_;
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, support);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) => {
                if p + r == F::zero() {
                    Some(F::zero())
                } else {
                    Some(F::from_config(2.0) * p * r / (p + r))
                }
            }
            _ => None,
        };
        ClassMetrics {
            label,
            support,
            precision,
            recall,
            f1,
        }
    }

    // Support-weighted average over the classes that actually occur.
    // Undefined (None) per-class values poison the average rather than
    // being silently treated as zero.
    fn weighted<F: Scalar>(&self, value: impl Fn(&ClassMetrics<F>) -> Option<F>) -> Option<F> {
        let mut sum = F::zero();
        for label in Label::ALL {
            let class = self.class_metrics::<F>(label);
            if class.support == 0 {
                continue;
            }
            sum += F::from_u64(class.support).unwrap() * value(&class)?;
        }
        Some(sum / F::from_u64(self.total()).unwrap())
    }

    /// All scoreboard metrics for one classifier. Undefined quantities come
    /// back as `None`; only an empty matrix is an error.
    pub fn report<F: Scalar>(&self, classifier: &str) -> Result<EvalReport<F>, EvalError> {
        let accuracy = self.accuracy()?;
        Ok(EvalReport {
            classifier: classifier.to_string(),
            accuracy,
            precision: self.weighted(|c| c.precision),
            recall: self.weighted(|c| c.recall),
            f1: self.weighted(|c| c.f1),
            fp_rate: self.fp_rate().ok(),
            fn_rate: self.fn_rate().ok(),
        })
    }

    /// Plain-text rendering of the 2×2 table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<14} {:>12} {:>12}", "", "pred BENIGN", "pred DDoS");
        let _ = writeln!(
            out,
            "{:<14} {:>12} {:>12}",
            "true BENIGN", self.benign_benign, self.benign_ddos
        );
        let _ = writeln!(
            out,
            "{:<14} {:>12} {:>12}",
            "true DDoS", self.ddos_benign, self.ddos_ddos
        );
        out
    }
}

fn format_metric<F: Scalar>(value: Option<F>) -> String {
    match value {
        Some(v) => format!("{:.6}", v.to_f64().unwrap()),
        None => "undefined".to_string(),
    }
}

/// Scoreboard of one or more classifier reports, sorted by accuracy
/// descending; equal accuracies fall back to classifier-name order.
#[derive(Debug, Clone, PartialEq)]
pub struct Scoreboard<F> {
    rows: Vec<EvalReport<F>>,
}

/// Column order of the scoreboard CSV.
pub const SCOREBOARD_COLUMNS: [&str; 7] = [
    "classifier",
    "accuracy",
    "precision",
    "recall",
    "f1",
    "fp",
    "fn",
];

impl<F: Scalar> Scoreboard<F> {
    pub fn new(reports: &[EvalReport<F>]) -> Result<Scoreboard<F>, EvalError> {
        if reports.is_empty() {
            return Err(EvalError::Empty);
        }
        let mut rows = reports.to_vec();
        rows.sort_by(|a, b| {
            b.accuracy
                .partial_cmp(&a.accuracy)
                .expect("accuracy is finite")
                .then_with(|| a.classifier.cmp(&b.classifier))
        });
        Ok(Scoreboard { rows })
    }

    pub fn rows(&self) -> &[EvalReport<F>] {
        &self.rows
    }

    /// Aligned text table, one row per classifier.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "classifier", "accuracy", "precision", "recall", "f1", "fp", "fn"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<20} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
                row.classifier,
                format!("{:.6}", row.accuracy.to_f64().unwrap()),
                format_metric(row.precision),
                format_metric(row.recall),
                format_metric(row.f1),
                format_metric(row.fp_rate),
                format_metric(row.fn_rate),
            );
        }
        out
    }

    /// Machine-readable CSV with fixed 6-decimal formatting and the columns
    /// in [`SCOREBOARD_COLUMNS`] order. Undefined metrics are written as
    /// `undefined`.
    pub fn to_csv(&self) -> String {
        let mut out = SCOREBOARD_COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.6},{},{},{},{},{}",
                row.classifier,
                row.accuracy.to_f64().unwrap(),
                format_metric(row.precision),
                format_metric(row.recall),
                format_metric(row.f1),
                format_metric(row.fp_rate),
                format_metric(row.fn_rate),
            );
        }
        out
    }
}

/// Builds a single-row report CSV (same columns as the scoreboard).
pub fn report_csv<F: Scalar>(report: &EvalReport<F>) -> String {
    Scoreboard::new(std::slice::from_ref(report))
        .expect("one report")
        .to_csv()
}
