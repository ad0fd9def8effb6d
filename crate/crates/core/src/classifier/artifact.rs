//! Versioned text format for trained models.
//!
//! A model file is line-oriented UTF-8: a magic/version line, a fixed
//! sequence of `key value…` lines (kind, feature names, scaler, split
//! settings, hyperparameters, parameters), and a closing `end` line.
//! Floats are written with Rust's shortest round-trip formatting, so
//! `load(save(m)) == m` bit-exactly for every parameter. Tree nodes are
//! stored in preorder, one per line.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::flow::Label;
use crate::preprocess::{Scaler, SplitConfig};
use crate::scalar::Scalar;

use super::tree::{Node, TreeModel, TreeParams};
use super::{
    LogisticModel, LogisticParams, ModelError, ModelKind, ModelMeta, SvmModel, SvmParams,
    TrainedModel,
};

const MAGIC: &str = "flowsieve model v";
const VERSION: u32 = 1;

fn join<F: Scalar>(values: &[F]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_node<F: Scalar, W: Write>(w: &mut W, node: &Node<F>) -> Result<(), ModelError> {
    match node {
        Node::Leaf { label, counts } => {
            writeln!(
                w,
                "node leaf {} {} {}",
                label.as_str(),
                counts[0],
                counts[1]
            )?;
        }
        Node::Split {
            feature,
            threshold,
            left,
            right,
        } => {
            writeln!(w, "node split {feature} {threshold}")?;
            write_node(w, left)?;
            write_node(w, right)?;
        }
    }
    Ok(())
}

fn count_nodes<F>(node: &Node<F>) -> usize {
    match node {
        Node::Leaf { .. } => 1,
        Node::Split { left, right, .. } => 1 + count_nodes(left) + count_nodes(right),
    }
}

/// Serializes a trained model into the v1 text format.
pub fn save_model<F: Scalar, W: Write>(model: &TrainedModel<F>, sink: W) -> Result<(), ModelError> {
    let mut w = BufWriter::new(sink);
    writeln!(w, "{MAGIC}{VERSION}")?;
    writeln!(w, "algo {}", model.kind.algo().name())?;
    writeln!(w, "features {}", model.meta.feature_names.join(" "))?;
    writeln!(w, "scaler_mean {}", join(model.meta.scaler.means()))?;
    writeln!(w, "scaler_std {}", join(model.meta.scaler.stds()))?;
    writeln!(w, "split_test_fraction {}", model.meta.split.test_fraction)?;
    writeln!(w, "split_seed {}", model.meta.split.seed)?;
    writeln!(w, "split_stratified {}", model.meta.split.stratified)?;
    match &model.kind {
        ModelKind::Logistic(m) => {
            writeln!(w, "logistic_learning_rate {}", m.params.learning_rate)?;
            writeln!(w, "logistic_iterations {}", m.params.iterations)?;
            writeln!(w, "logistic_l2 {}", m.params.l2)?;
            writeln!(w, "logistic_intercept {}", m.intercept)?;
            writeln!(w, "logistic_coefficients {}", join(&m.coefficients))?;
        }
        ModelKind::Svm(m) => {
            writeln!(w, "svm_lambda {}", m.params.lambda)?;
            writeln!(w, "svm_epochs {}", m.params.epochs)?;
            writeln!(w, "svm_seed {}", m.params.seed)?;
            writeln!(w, "svm_weights {}", join(&m.weights))?;
            writeln!(w, "svm_bias {}", m.bias)?;
        }
        ModelKind::Tree(m) => {
            writeln!(w, "tree_max_depth {}", m.params.max_depth)?;
            writeln!(w, "tree_min_samples_split {}", m.params.min_samples_split)?;
            writeln!(w, "tree_nodes {}", count_nodes(m.root()))?;
            write_node(&mut w, m.root())?;
        }
    }
    writeln!(w, "end")?;
    w.flush()?;
    Ok(())
}

pub fn save_to_path<F: Scalar>(
    model: &TrainedModel<F>,
    path: impl AsRef<Path>,
) -> Result<(), ModelError> {
    save_model(model, File::create(path)?)
}

// Sequential reader over the fixed v1 line layout.
struct Lines<'a> {
    lines: Vec<&'a str>,
    cursor: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines {
            lines: text.lines().map(|l| l.trim_end_matches('\r')).collect(),
            cursor: 0,
        }
    }

    fn line_number(&self) -> usize {
        self.cursor
    }

    fn corrupt(&self, reason: impl Into<String>) -> ModelError {
        ModelError::Corrupt {
            line: self.cursor,
            reason: reason.into(),
        }
    }

    fn next(&mut self) -> Result<&'a str, ModelError> {
        let line = self
            .lines
            .get(self.cursor)
            .copied()
            .ok_or(ModelError::Corrupt {
                line: self.cursor + 1,
                reason: "unexpected end of file".into(),
            })?;
        self.cursor += 1;
        Ok(line)
    }

    /// Next line, which must start with `key ` (or equal `key`).
    fn expect(&mut self, key: &str) -> Result<&'a str, ModelError> {
        let line = self.next()?;
        if line == key {
            return Ok("");
        }
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| self.corrupt(format!("expected `{key}`, found `{line}`")))
    }
}

fn parse_scalar<F: Scalar>(text: &str, lines: &Lines) -> Result<F, ModelError> {
    let value: F = text
        .parse()
        .map_err(|_| lines.corrupt(format!("`{text}` is not a number")))?;
    if !value.is_finite() {
        return Err(lines.corrupt(format!("non-finite parameter `{text}`")));
    }
    Ok(value)
}

fn parse_scalars<F: Scalar>(text: &str, lines: &Lines) -> Result<Vec<F>, ModelError> {
    text.split_whitespace()
        .map(|t| parse_scalar(t, lines))
        .collect()
}

fn parse_int<T: std::str::FromStr>(text: &str, lines: &Lines) -> Result<T, ModelError> {
    text.trim()
        .parse()
        .map_err(|_| lines.corrupt(format!("`{text}` is not a valid integer")))
}

fn parse_nodes<F: Scalar>(
    lines: &mut Lines,
    count: usize,
    n_features: usize,
) -> Result<Node<F>, ModelError> {
    if count == 0 {
        return Err(lines.corrupt("tree_nodes must be positive"));
    }
    let mut pending: Vec<(usize, F, Option<Node<F>>)> = Vec::new();
    let mut root: Option<Node<F>> = None;
    for _ in 0..count {
        if root.is_some() {
            return Err(lines.corrupt("extra node after the tree was complete"));
        }
        let body = lines.expect("node")?;
        let mut parts = body.split_whitespace();
        let mut node = match parts.next() {
            Some("split") => {
                let feature: usize = parse_int(
                    parts
                        .next()
                        .ok_or_else(|| lines.corrupt("split needs a feature"))?,
                    lines,
                )?;
                if feature >= n_features {
                    return Err(lines.corrupt(format!("feature index {feature} out of range")));
                }
                let threshold = parse_scalar(
                    parts
                        .next()
                        .ok_or_else(|| lines.corrupt("split needs a threshold"))?,
                    lines,
                )?;
                pending.push((feature, threshold, None));
                continue;
            }
            Some("leaf") => {
                let label_text = parts
                    .next()
                    .ok_or_else(|| lines.corrupt("leaf needs a label"))?;
                let label = Label::parse(label_text)
                    .ok_or_else(|| lines.corrupt(format!("unknown label `{label_text}`")))?;
                let benign: u64 = parse_int(
                    parts
                        .next()
                        .ok_or_else(|| lines.corrupt("leaf needs counts"))?,
                    lines,
                )?;
                let ddos: u64 = parse_int(
                    parts
                        .next()
                        .ok_or_else(|| lines.corrupt("leaf needs counts"))?,
                    lines,
                )?;
                if benign + ddos == 0 {
                    return Err(lines.corrupt("leaf counts sum to zero"));
                }
                Node::Leaf {
                    label,
                    counts: [benign, ddos],
                }
            }
            other => {
                return Err(lines.corrupt(format!("unknown node form {other:?}")));
            }
        };
        // A completed subtree attaches to the innermost pending split.
        loop {
            match pending.last_mut() {
                None => {
                    root = Some(node);
                    break;
                }
                Some((_, _, left @ None)) => {
                    *left = Some(node);
                    break;
                }
                Some(_) => {
                    let (feature, threshold, left) = pending.pop().unwrap();
                    node = Node::Split {
                        feature,
                        threshold,
                        left: Box::new(left.unwrap()),
                        right: Box::new(node),
                    };
                }
            }
        }
    }
    root.ok_or_else(|| lines.corrupt("tree is incomplete: splits are missing children"))
}

/// Reads a model saved by [`save_model`].
pub fn load_model<F: Scalar, R: Read>(source: R) -> Result<TrainedModel<F>, ModelError> {
    let mut text = String::new();
    BufReader::new(source).read_to_string(&mut text)?;
    let mut lines = Lines::new(&text);

    let header = lines.next()?;
    let version_text = header.strip_prefix(MAGIC).ok_or_else(|| {
        lines.corrupt(format!(
            "not a flowsieve model file (first line `{header}`)"
        ))
    })?;
    let version: u32 = version_text
        .trim()
        .parse()
        .map_err(|_| lines.corrupt(format!("bad version `{version_text}`")))?;
    if version != VERSION {
        return Err(ModelError::UnsupportedVersion {
            found: version,
            supported: VERSION,
        });
    }

    let algo = lines.expect("algo")?.trim().to_string();
    let feature_names: Vec<String> = lines
        .expect("features")?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if feature_names.is_empty() {
        return Err(lines.corrupt("model lists no features"));
    }
    let k = feature_names.len();

    let means: Vec<F> = parse_scalars(lines.expect("scaler_mean")?, &lines)?;
    let stds: Vec<F> = parse_scalars(lines.expect("scaler_std")?, &lines)?;
    if means.len() != k || stds.len() != k {
        return Err(lines.corrupt(format!(
            "scaler length {}/{} does not match {k} features",
            means.len(),
            stds.len()
        )));
    }
    if stds.iter().any(|&s| s <= F::zero()) {
        return Err(lines.corrupt("scaler std entries must be positive"));
    }

    let test_fraction: f64 = {
        let t = lines.expect("split_test_fraction")?;
        t.trim()
            .parse()
            .map_err(|_| lines.corrupt(format!("bad test fraction `{t}`")))?
    };
    let seed: u64 = parse_int(lines.expect("split_seed")?, &lines)?;
    let stratified: bool = {
        let t = lines.expect("split_stratified")?.trim();
        match t {
            "true" => true,
            "false" => false,
            _ => return Err(lines.corrupt(format!("bad boolean `{t}`"))),
        }
    };

    let kind = match algo.as_str() {
        "logistic" => {
            let learning_rate = parse_scalar(lines.expect("logistic_learning_rate")?, &lines)?;
            let iterations: usize = parse_int(lines.expect("logistic_iterations")?, &lines)?;
            let l2 = parse_scalar(lines.expect("logistic_l2")?, &lines)?;
            let intercept = parse_scalar(lines.expect("logistic_intercept")?, &lines)?;
            let coefficients: Vec<F> =
                parse_scalars(lines.expect("logistic_coefficients")?, &lines)?;
            if coefficients.len() != k {
                return Err(lines.corrupt(format!(
                    "{} coefficients for {k} features",
                    coefficients.len()
                )));
            }
            ModelKind::Logistic(LogisticModel {
                intercept,
                coefficients,
                params: LogisticParams {
                    learning_rate,
                    iterations,
                    l2,
                },
            })
        }
        "svm" => {
            let lambda = parse_scalar(lines.expect("svm_lambda")?, &lines)?;
            let epochs: usize = parse_int(lines.expect("svm_epochs")?, &lines)?;
            let svm_seed: u64 = parse_int(lines.expect("svm_seed")?, &lines)?;
            let weights: Vec<F> = parse_scalars(lines.expect("svm_weights")?, &lines)?;
            if weights.len() != k {
                return Err(lines.corrupt(format!("{} weights for {k} features", weights.len())));
            }
            let bias = parse_scalar(lines.expect("svm_bias")?, &lines)?;
            ModelKind::Svm(SvmModel {
                weights,
                bias,
                params: SvmParams {
                    lambda,
                    epochs,
                    seed: svm_seed,
                },
            })
        }
        "tree" => {
            let max_depth: usize = parse_int(lines.expect("tree_max_depth")?, &lines)?;
            let min_samples_split: usize =
                parse_int(lines.expect("tree_min_samples_split")?, &lines)?;
            let node_count: usize = parse_int(lines.expect("tree_nodes")?, &lines)?;
            let root = parse_nodes(&mut lines, node_count, k)?;
            ModelKind::Tree(TreeModel::from_parts(
                root,
                k,
                TreeParams {
                    max_depth,
                    min_samples_split,
                },
            ))
        }
        other => return Err(lines.corrupt(format!("unknown algo `{other}`"))),
    };

    lines.expect("end")?;
    let _ = lines.line_number();

    Ok(TrainedModel {
        meta: ModelMeta {
            feature_names,
            scaler: Scaler::from_parts(means, stds),
            split: SplitConfig {
                test_fraction,
                seed,
                stratified,
            },
        },
        kind,
    })
}

pub fn load_from_path<F: Scalar>(path: impl AsRef<Path>) -> Result<TrainedModel<F>, ModelError> {
    load_model(File::open(path)?)
}
