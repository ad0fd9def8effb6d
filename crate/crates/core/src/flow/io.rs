//! CSV ingestion and export for flow records.
//!
//! The reader needs the nine canonical columns (eight numeric features plus
//! `Label`); any extra columns in the file are ignored by name, so real
//! CICFlowMeter exports with ~80 columns load unchanged. Header matching is
//! case-insensitive with surrounding whitespace stripped, and a
//! [`ColumnMap`] supplies additional accepted header spellings.
//!
//! Rows with unparseable or out-of-domain values are collected into
//! [`ParseReport::rejected`] rather than silently dropped; cleaning
//! non-finite values is a separate, explicit step
//! ([`crate::preprocess::clean`]).

use std::io::{Read, Write};

use super::{Dataset, FeatureId, FlowError, FlowRecord, Label};

/// The nine output header names, in canonical column order.
pub const CANONICAL_HEADERS: [&str; 9] = [
    "Destination",
    "Flow Duration",
    "Total Fwd Pkts",
    "Total Bwd Pkts",
    "Total Length of Fwd Pkts",
    "Total Length of Bwd Pkts",
    "Initial Window bytes Fwd",
    "Initial Window bytes Bwd",
    "Label",
];

/// A required input column: one numeric feature or the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Feature(FeatureId),
    Label,
}

impl Column {
    pub const ALL: [Column; 9] = [
        Column::Feature(FeatureId::DestinationPort),
        Column::Feature(FeatureId::FlowDuration),
        Column::Feature(FeatureId::TotalFwdPkts),
        Column::Feature(FeatureId::TotalBwdPkts),
        Column::Feature(FeatureId::TotalLenFwd),
        Column::Feature(FeatureId::TotalLenBwd),
        Column::Feature(FeatureId::InitWinFwd),
        Column::Feature(FeatureId::InitWinBwd),
        Column::Label,
    ];

    /// Config key used in name-mapping files (`destination_port`, …, `label`).
    pub fn key(self) -> &'static str {
        match self {
            Column::Feature(f) => f.name(),
            Column::Label => "label",
        }
    }
}

/// Maps each required column to its accepted header spellings.
///
/// The default map accepts the canonical headers plus the header variants
/// produced by CICFlowMeter releases (`Destination Port`, `Dst Port`,
/// `Init_Win_bytes_forward`, …). Aliases are matched case-insensitively
/// after trimming.
#[derive(Debug, Clone)]
pub struct ColumnMap {
    aliases: [Vec<String>; 9],
}

impl Default for ColumnMap {
    fn default() -> ColumnMap {
        let alias_table: [&[&str]; 9] = [
            &["Destination", "Destination Port", "Dst Port"],
            &["Flow Duration"],
            &["Total Fwd Pkts", "Total Fwd Packets", "Tot Fwd Pkts"],
            &["Total Bwd Pkts", "Total Backward Packets", "Tot Bwd Pkts"],
            &[
                "Total Length of Fwd Pkts",
                "Total Length of Fwd Packets",
                "TotLen Fwd Pkts",
            ],
            &[
                "Total Length of Bwd Pkts",
                "Total Length of Bwd Packets",
                "TotLen Bwd Pkts",
            ],
            &[
                "Initial Window bytes Fwd",
                "Init_Win_bytes_forward",
                "Init Fwd Win Byts",
            ],
            &[
                "Initial Window bytes Bwd",
                "Init_Win_bytes_backward",
                "Init Bwd Win Byts",
            ],
            &["Label"],
        ];
        let aliases = alias_table.map(|names| {
            names
                .iter()
                .map(|n| n.trim().to_ascii_lowercase())
                .collect()
        });
        ColumnMap { aliases }
    }
}

impl ColumnMap {
    /// Adds an accepted header spelling for `column`.
    pub fn add_alias(&mut self, column: Column, header: &str) {
        let idx = Column::ALL.iter().position(|c| *c == column).unwrap();
        self.aliases[idx].push(header.trim().to_ascii_lowercase());
    }

    /// Extends the map from `key = Header Name` lines. Keys are the
    /// snake_case feature names plus `label`; blank lines and `#` comments
    /// are skipped.
    pub fn apply_config(&mut self, text: &str) -> Result<(), FlowError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| FlowError::Parse {
                row: lineno + 1,
                column: "column map".into(),
                reason: format!("expected `key = header`, got `{line}`"),
            })?;
            let key = key.trim();
            let column = Column::ALL
                .into_iter()
                .find(|c| c.key() == key)
                .ok_or_else(|| FlowError::MissingColumn(key.to_string()))?;
            self.add_alias(column, value);
        }
        Ok(())
    }

    fn resolve(&self, headers: &csv::StringRecord) -> Result<[usize; 9], FlowError> {
        let normalized: Vec<String> = headers
            .iter()
            .map(|h| h.trim().to_ascii_lowercase())
            .collect();
        let mut indices = [0usize; 9];
        for (slot, accepted) in self.aliases.iter().enumerate() {
            let found = normalized
                .iter()
                .position(|h| accepted.iter().any(|a| a == h));
            match found {
                Some(i) => indices[slot] = i,
                None => {
                    return Err(FlowError::MissingColumn(
                        Column::ALL[slot].key().to_string(),
                    ));
                }
            }
        }
        Ok(indices)
    }
}

/// Result of a parse: the accepted records plus a report of every rejected
/// row. `dataset.len() + rejected.len()` equals the file's data-row count.
#[derive(Debug)]
pub struct ParseReport {
    pub dataset: Dataset,
    /// One [`FlowError::Parse`] per rejected row.
    pub rejected: Vec<FlowError>,
}

fn parse_row(
    record: &csv::StringRecord,
    indices: &[usize; 9],
    row: usize,
) -> Result<FlowRecord, FlowError> {
    let field = |slot: usize| -> Result<&str, FlowError> {
        record.get(indices[slot]).ok_or_else(|| FlowError::Parse {
            row,
            column: Column::ALL[slot].key().to_string(),
            reason: "missing value".into(),
        })
    };

    let mut values = [0.0f64; 8];
    for (slot, value_slot) in values.iter_mut().enumerate() {
        let text = field(slot)?.trim();
        let column = Column::ALL[slot].key();
        let value: f64 = text.parse().map_err(|_| FlowError::Parse {
            row,
            column: column.to_string(),
            reason: format!("`{text}` is not numeric"),
        })?;
        let Column::Feature(id) = Column::ALL[slot] else {
            unreachable!()
        };
        FlowRecord::validate_feature(id, value).map_err(|reason| FlowError::Parse {
            row,
            column: column.to_string(),
            reason,
        })?;
        *value_slot = value;
    }

    let label_text = field(8)?;
    let label = Label::parse(label_text).ok_or_else(|| FlowError::Parse {
        row,
        column: "label".into(),
        reason: format!("`{}` is not BENIGN or DDoS", label_text.trim()),
    })?;

    Ok(FlowRecord {
        destination_port: values[0],
        flow_duration: values[1],
        total_fwd_pkts: values[2],
        total_bwd_pkts: values[3],
        total_len_fwd: values[4],
        total_len_bwd: values[5],
        init_win_fwd: values[6],
        init_win_bwd: values[7],
        label,
    })
}

/// Parses a CICFlowMeter-style CSV stream into a [`Dataset`].
///
/// The first row must be a header. Rows with malformed numerics, out-of-range
/// values or unknown labels are reported in [`ParseReport::rejected`]; record
/// order equals file order. Errors when a required column is absent or when
/// no row parses at all.
pub fn parse_flow_csv<R: Read>(
    source: R,
    source_name: &str,
    columns: &ColumnMap,
) -> Result<ParseReport, FlowError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].trim().is_empty()) {
        return Err(FlowError::EmptyDataset {
            source_name: source_name.to_string(),
            rejected: 0,
        });
    }
    let indices = columns.resolve(&headers)?;

    let mut records = Vec::new();
    let mut rejected = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_index = i + 1;
        let record = row?;
        // Tolerate fully blank trailing lines.
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        match parse_row(&record, &indices, row_index) {
            Ok(r) => records.push(r),
            Err(e) => rejected.push(e),
        }
    }

    if records.is_empty() {
        return Err(FlowError::EmptyDataset {
            source_name: source_name.to_string(),
            rejected: rejected.len(),
        });
    }
    Ok(ParseReport {
        dataset: Dataset::new(records, source_name),
        rejected,
    })
}

/// Writes a dataset as CSV with the nine canonical columns in canonical
/// order. Numeric values use Rust's shortest round-trip formatting, so
/// `parse_flow_csv` ∘ `write_flow_csv` is the identity on datasets.
pub fn write_flow_csv<W: Write>(sink: W, ds: &Dataset) -> Result<(), FlowError> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(CANONICAL_HEADERS)?;
    for r in &ds.records {
        let mut fields: Vec<String> = FeatureId::ALL
            .into_iter()
            .map(|id| r.feature(id).to_string())
            .collect();
        fields.push(r.label.as_str().to_string());
        writer.write_record(&fields)?;
    }
    writer.flush()?;
    Ok(())
}
