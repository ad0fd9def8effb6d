//! Flow-record data model: labeled network-flow feature rows and their
//! per-class summary statistics.
//!
//! A [`FlowRecord`] holds the nine columns of a CICFlowMeter-style export
//! (eight numeric flow features plus the ground-truth [`Label`]). Numeric
//! fields are stored as `f64` even though well-formed inputs are integers:
//! that lets defective values (`NaN`, `inf`) survive parsing so that
//! [`crate::preprocess::clean`] can remove them as an explicit step.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

pub mod io;

/// Errors from flow-record parsing and summarization.
#[derive(Debug, Error)]
pub enum FlowError {
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    /// A malformed value in one data row. `row` is the 1-based data-row
    /// index (the header row is not counted).
    #[error("row {row}, column `{column}`: {reason}")]
    Parse {
        row: usize,
        column: String,
        reason: String,
    },
    #[error("`{source_name}` contains no usable data rows ({rejected} rejected)")]
    EmptyDataset {
        source_name: String,
        rejected: usize,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Ground-truth class of one flow. Exactly two values exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Benign,
    Ddos,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Benign, Label::Ddos];

    /// Canonical spelling, as written by the CSV writer.
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Benign => "BENIGN",
            Label::Ddos => "DDoS",
        }
    }

    /// Case-insensitive parse of `BENIGN` / `DDoS`. Anything else is
    /// rejected; there is never a silent third class.
    pub fn parse(text: &str) -> Option<Label> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("benign") {
            Some(Label::Benign)
        } else if t.eq_ignore_ascii_case("ddos") {
            Some(Label::Ddos)
        } else {
            None
        }
    }

    /// Index into per-class arrays: BENIGN = 0, DDoS = 1.
    pub fn index(self) -> usize {
        match self {
            Label::Benign => 0,
            Label::Ddos => 1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the eight numeric flow features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureId {
    DestinationPort,
    FlowDuration,
    TotalFwdPkts,
    TotalBwdPkts,
    TotalLenFwd,
    TotalLenBwd,
    InitWinFwd,
    InitWinBwd,
}

impl FeatureId {
    pub const ALL: [FeatureId; 8] = [
        FeatureId::DestinationPort,
        FeatureId::FlowDuration,
        FeatureId::TotalFwdPkts,
        FeatureId::TotalBwdPkts,
        FeatureId::TotalLenFwd,
        FeatureId::TotalLenBwd,
        FeatureId::InitWinFwd,
        FeatureId::InitWinBwd,
    ];

    /// Default training features: the byte-length and TCP-window columns.
    pub const DEFAULT: [FeatureId; 4] = [
        FeatureId::TotalLenFwd,
        FeatureId::TotalLenBwd,
        FeatureId::InitWinFwd,
        FeatureId::InitWinBwd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureId::DestinationPort => "destination_port",
            FeatureId::FlowDuration => "flow_duration",
            FeatureId::TotalFwdPkts => "total_fwd_pkts",
            FeatureId::TotalBwdPkts => "total_bwd_pkts",
            FeatureId::TotalLenFwd => "total_len_fwd",
            FeatureId::TotalLenBwd => "total_len_bwd",
            FeatureId::InitWinFwd => "init_win_fwd",
            FeatureId::InitWinBwd => "init_win_bwd",
        }
    }

    pub fn parse(name: &str) -> Option<FeatureId> {
        let n = name.trim();
        FeatureId::ALL.into_iter().find(|f| f.name() == n)
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One network flow's feature values plus its ground-truth label.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRecord {
    pub destination_port: f64,
    /// Flow duration in microseconds.
    pub flow_duration: f64,
    pub total_fwd_pkts: f64,
    pub total_bwd_pkts: f64,
    /// Total bytes sent client → server.
    pub total_len_fwd: f64,
    /// Total bytes sent server → client.
    pub total_len_bwd: f64,
    /// Initial TCP window bytes, forward direction; −1 when absent.
    pub init_win_fwd: f64,
    /// Initial TCP window bytes, backward direction; −1 when absent.
    pub init_win_bwd: f64,
    pub label: Label,
}

impl FlowRecord {
    pub fn feature(&self, id: FeatureId) -> f64 {
        match id {
            FeatureId::DestinationPort => self.destination_port,
            FeatureId::FlowDuration => self.flow_duration,
            FeatureId::TotalFwdPkts => self.total_fwd_pkts,
            FeatureId::TotalBwdPkts => self.total_bwd_pkts,
            FeatureId::TotalLenFwd => self.total_len_fwd,
            FeatureId::TotalLenBwd => self.total_len_bwd,
            FeatureId::InitWinFwd => self.init_win_fwd,
            FeatureId::InitWinBwd => self.init_win_bwd,
        }
    }

    /// Domain check for one feature value. Range invariants apply to finite
    /// values only; non-finite values pass here and are handled by
    /// [`crate::preprocess::clean`].
    pub fn validate_feature(id: FeatureId, value: f64) -> Result<(), String> {
        match id {
            FeatureId::DestinationPort => {
                if !value.is_finite() || value.fract() != 0.0 || !(0.0..=65535.0).contains(&value) {
                    return Err(format!("port {value} not an integer in [0, 65535]"));
                }
            }
            FeatureId::FlowDuration
            | FeatureId::TotalFwdPkts
            | FeatureId::TotalBwdPkts
            | FeatureId::TotalLenFwd
            | FeatureId::TotalLenBwd => {
                if value.is_finite() && value < 0.0 {
                    return Err(format!("negative count/duration {value}"));
                }
            }
            FeatureId::InitWinFwd | FeatureId::InitWinBwd => {
                if value.is_finite() && value < -1.0 {
                    return Err(format!("window bytes {value} below the −1 sentinel"));
                }
            }
        }
        Ok(())
    }

    /// Checks every feature against its domain invariant.
    pub fn validate(&self) -> Result<(), String> {
        for id in FeatureId::ALL {
            Self::validate_feature(id, self.feature(id))
                .map_err(|e| format!("{}: {e}", id.name()))?;
        }
        Ok(())
    }

    /// True when all eight numeric features are finite.
    pub fn is_finite(&self) -> bool {
        FeatureId::ALL
            .into_iter()
            .all(|id| self.feature(id).is_finite())
    }
}

/// An ordered, labeled collection of flow records. Record order equals
/// input-file order. Immutable after construction in normal pipelines and
/// safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<FlowRecord>,
    pub source_name: String,
}

impl Dataset {
    pub fn new(records: Vec<FlowRecord>, source_name: impl Into<String>) -> Dataset {
        Dataset {
            records,
            source_name: source_name.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record count per class, indexed by [`Label::index`].
    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0usize; 2];
        for r in &self.records {
            counts[r.label.index()] += 1;
        }
        counts
    }
}

/// Per-feature statistics of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSummary<F> {
    pub feature: FeatureId,
    pub mean: F,
    /// Population standard deviation (divide by n): the summary describes
    /// the whole loaded set, not a sample estimator.
    pub std: F,
    pub min: F,
    pub max: F,
}

/// Statistics for every feature of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSummary<F> {
    pub label: Label,
    pub count: usize,
    /// One entry per feature, in [`FeatureId::ALL`] order.
    pub features: Vec<FeatureSummary<F>>,
}

impl<F: Scalar> ClassSummary<F> {
    pub fn feature(&self, id: FeatureId) -> &FeatureSummary<F> {
        self.features
            .iter()
            .find(|f| f.feature == id)
            .expect("summary covers every feature")
    }
}

/// Per-class, per-feature mean/std/min/max. Only classes with at least one
/// record appear.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats<F> {
    pub classes: Vec<ClassSummary<F>>,
}

impl<F: Scalar> SummaryStats<F> {
    pub fn class(&self, label: Label) -> Option<&ClassSummary<F>> {
        self.classes.iter().find(|c| c.label == label)
    }
}

/// Computes per-class mean, population standard deviation, min and max for
/// every numeric feature. Assumes a cleaned dataset: non-finite values
/// propagate into the statistics.
pub fn summarize<F: Scalar>(ds: &Dataset) -> Result<SummaryStats<F>, FlowError> {
    if ds.is_empty() {
        return Err(FlowError::EmptyDataset {
            source_name: ds.source_name.clone(),
            rejected: 0,
        });
    }
    let mut classes = Vec::new();
    for label in Label::ALL {
        let values: Vec<&FlowRecord> = ds.records.iter().filter(|r| r.label == label).collect();
        if values.is_empty() {
            continue;
        }
        let n = F::from_usize(values.len()).expect("count fits scalar");
        let features = FeatureId::ALL
            .into_iter()
            .map(|id| {
                let xs: Vec<F> = values
                    .iter()
                    .map(|r| F::from_f64(r.feature(id)).expect("f64 into scalar"))
                    .collect();
                let mean = xs.iter().copied().sum::<F>() / n;
                let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<F>() / n;
                let min = xs.iter().copied().fold(F::infinity(), F::min);
                let max = xs.iter().copied().fold(F::neg_infinity(), F::max);
                FeatureSummary {
                    feature: id,
                    mean,
                    std: var.sqrt(),
                    min,
                    max,
                }
            })
            .collect();
        classes.push(ClassSummary {
            label,
            count: values.len(),
            features,
        });
    }
    Ok(SummaryStats { classes })
}
