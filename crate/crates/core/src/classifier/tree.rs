//! Binary CART classifier: recursive splits chosen by weighted Gini
//! impurity.
//!
//! Candidate thresholds are midpoints between consecutive distinct sorted
//! feature values. Equal-impurity candidates resolve to the lowest feature
//! index, then the lowest threshold, so construction is fully
//! deterministic. A node stops splitting on max depth, on too few samples,
//! when pure, or when no candidate strictly reduces the weighted impurity.

use crate::flow::Label;
use crate::preprocess::FeatureMatrix;
use crate::scalar::Scalar;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    /// Maximum root-to-leaf path length in edges; ≥ 1.
    pub max_depth: usize,
    /// Minimum samples a node needs to be considered for splitting; ≥ 2.
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> TreeParams {
        TreeParams {
            max_depth: 10,
            min_samples_split: 2,
        }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.max_depth < 1 {
            return Err(ModelError::InvalidHyperparam(
                "max_depth must be at least 1".into(),
            ));
        }
        if self.min_samples_split < 2 {
            return Err(ModelError::InvalidHyperparam(
                "min_samples_split must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// Gini impurity `1 − Σ p_c²` of a node with the given class counts
/// (BENIGN, DDoS). A pure or empty node scores 0; a 50/50 node scores 0.5.
pub fn gini<F: Scalar>(counts: [u64; 2]) -> F {
    let total = counts[0] + counts[1];
    if total == 0 {
        return F::zero();
    }
    let t = F::from_u64(total).unwrap();
    let pb = F::from_u64(counts[0]).unwrap() / t;
    let pd = F::from_u64(counts[1]).unwrap() / t;
    F::one() - pb * pb - pd * pd
}

/// One node of a fitted tree. Internal nodes route `x[feature] < threshold`
/// to the left child; leaves carry the majority label and the training
/// class counts that produced it (ties predict BENIGN).
#[derive(Debug, Clone, PartialEq)]
pub enum Node<F> {
    Leaf {
        label: Label,
        counts: [u64; 2],
    },
    Split {
        feature: usize,
        threshold: F,
        left: Box<Node<F>>,
        right: Box<Node<F>>,
    },
}

impl<F: Scalar> Node<F> {
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    fn classify(&self, x: &[F]) -> Label {
        match self {
            Node::Leaf { label, .. } => *label,
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if x[*feature] < *threshold {
                    left.classify(x)
                } else {
                    right.classify(x)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel<F> {
    root: Node<F>,
    n_features: usize,
    pub params: TreeParams,
}

impl<F: Scalar> TreeModel<F> {
    pub fn from_parts(root: Node<F>, n_features: usize, params: TreeParams) -> TreeModel<F> {
        TreeModel {
            root,
            n_features,
            params,
        }
    }

    pub fn root(&self) -> &Node<F> {
        &self.root
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn predict(&self, x: &[F]) -> Result<Label, ModelError> {
        if x.len() != self.n_features {
            return Err(ModelError::DimensionMismatch {
                expected: self.n_features,
                found: x.len(),
            });
        }
        Ok(self.root.classify(x))
    }
}

fn class_counts<F: Scalar>(m: &FeatureMatrix<F>, indices: &[usize]) -> [u64; 2] {
    let mut counts = [0u64; 2];
    for &i in indices {
        counts[m.label(i).index()] += 1;
    }
    counts
}

fn majority(counts: [u64; 2]) -> Label {
    if counts[1] > counts[0] {
        Label::Ddos
    } else {
        Label::Benign
    }
}

// Best (feature, threshold) by weighted Gini, or None when no candidate
// strictly beats the parent impurity.
fn best_split<F: Scalar>(
    m: &FeatureMatrix<F>,
    indices: &[usize],
    parent_counts: [u64; 2],
) -> Option<(usize, F)> {
    let n = F::from_usize(indices.len()).unwrap();
    let parent_impurity = gini::<F>(parent_counts);
    let mut best: Option<(F, usize, F)> = None;

    let mut order = indices.to_vec();
    for feature in 0..m.n_cols() {
        order.sort_unstable_by(|&a, &b| m.row(a)[feature].partial_cmp(&m.row(b)[feature]).unwrap());
        let mut left = [0u64; 2];
        for w in 0..order.len() - 1 {
            left[m.label(order[w]).index()] += 1;
            let prev = m.row(order[w])[feature];
            let next = m.row(order[w + 1])[feature];
            if next <= prev {
                continue;
            }
            let threshold = (prev + next) / F::from_config(2.0);
            if threshold <= prev {
                // Adjacent floats can round the midpoint onto `prev`.
                continue;
            }
            let right = [parent_counts[0] - left[0], parent_counts[1] - left[1]];
            let n_left = F::from_u64(left[0] + left[1]).unwrap();
            let n_right = F::from_u64(right[0] + right[1]).unwrap();
            let weighted = (n_left * gini::<F>(left) + n_right * gini::<F>(right)) / n;
            if best.is_none_or(|(b, _, _)| weighted < b) {
                best = Some((weighted, feature, threshold));
            }
        }
    }

    best.and_then(|(weighted, feature, threshold)| {
        (weighted < parent_impurity).then_some((feature, threshold))
    })
}

fn build_node<F: Scalar>(
    m: &FeatureMatrix<F>,
    indices: Vec<usize>,
    depth: usize,
    params: &TreeParams,
) -> Node<F> {
    let counts = class_counts(m, &indices);
    let pure = counts[0] == 0 || counts[1] == 0;
    if depth >= params.max_depth || indices.len() < params.min_samples_split || pure {
        return Node::Leaf {
            label: majority(counts),
            counts,
        };
    }
    match best_split(m, &indices, counts) {
        None => Node::Leaf {
            label: majority(counts),
            counts,
        },
        Some((feature, threshold)) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                .into_iter()
                .partition(|&i| m.row(i)[feature] < threshold);
            Node::Split {
                feature,
                threshold,
                left: Box::new(build_node(m, left_idx, depth + 1, params)),
                right: Box::new(build_node(m, right_idx, depth + 1, params)),
            }
        }
    }
}

/// Grows a tree by recursive binary splitting. Single-class input yields a
/// single leaf, never an error.
pub fn train<F: Scalar>(
    train_data: &FeatureMatrix<F>,
    params: &TreeParams,
) -> Result<TreeModel<F>, ModelError> {
    params.validate()?;
    let indices: Vec<usize> = (0..train_data.n_rows()).collect();
    let root = build_node(train_data, indices, 0, params);
    Ok(TreeModel {
        root,
        n_features: train_data.n_cols(),
        params: *params,
    })
}
