//! Dataset preparation: cleaning, feature selection, standardization and
//! the deterministic train/test split.
//!
//! Everything here is a pure function over immutable inputs. The scaler is
//! always fit on the training half only and applied to both halves, so no
//! test-set statistics leak into training.

use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::flow::{Dataset, FeatureId, Label};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("cleaning dropped every record")]
    AllRecordsDropped,
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("class {label} has too few samples ({count}) for a stratified split")]
    ClassTooSmall { label: Label, count: usize },
    #[error("dataset has no records")]
    EmptyDataset,
    #[error("no features selected")]
    EmptySelection,
    #[error("non-finite value at row {row}, feature `{feature}` (clean the dataset first)")]
    NonFinite { row: usize, feature: String },
    #[error("test fraction {0} is outside (0, 1)")]
    InvalidTestFraction(f64),
    #[error("split leaves an empty half ({rows} rows, {test_rows} of them test)")]
    DegenerateSplit { rows: usize, test_rows: usize },
}

/// Numeric view of a dataset: n samples × k features, row-major, plus the
/// per-row labels and the selected feature names. Every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<F> {
    data: Vec<F>,
    n_cols: usize,
    labels: Vec<Label>,
    feature_names: Vec<String>,
}

impl<F: Scalar> FeatureMatrix<F> {
    pub fn new(
        data: Vec<F>,
        labels: Vec<Label>,
        feature_names: Vec<String>,
    ) -> Result<FeatureMatrix<F>, PreprocessError> {
        let n_cols = feature_names.len();
        if n_cols == 0 {
            return Err(PreprocessError::EmptySelection);
        }
        if labels.is_empty() {
            return Err(PreprocessError::EmptyDataset);
        }
        if data.len() != labels.len() * n_cols {
            return Err(PreprocessError::DimensionMismatch {
                expected: labels.len() * n_cols,
                found: data.len(),
            });
        }
        for (i, value) in data.iter().enumerate() {
            if !value.is_finite() {
                return Err(PreprocessError::NonFinite {
                    row: i / n_cols,
                    feature: feature_names[i % n_cols].clone(),
                });
            }
        }
        Ok(FeatureMatrix {
            data,
            n_cols,
            labels,
            feature_names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F]> {
        self.data.chunks_exact(self.n_cols)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0usize; 2];
        for l in &self.labels {
            counts[l.index()] += 1;
        }
        counts
    }

    /// The single present class, if only one occurs.
    pub fn single_class(&self) -> Option<Label> {
        let [b, d] = self.class_counts();
        match (b, d) {
            (_, 0) => Some(Label::Benign),
            (0, _) => Some(Label::Ddos),
            _ => None,
        }
    }

    /// New matrix holding the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix<F> {
        let mut data = Vec::with_capacity(indices.len() * self.n_cols);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            data.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        FeatureMatrix {
            data,
            n_cols: self.n_cols,
            labels,
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Cleaning outcome: the surviving records and how many were removed.
#[derive(Debug, Clone)]
pub struct CleanReport {
    pub dataset: Dataset,
    pub removed: usize,
}

/// Removes records containing non-finite numerics. Deterministic and
/// idempotent; errors if nothing survives.
pub fn clean(ds: &Dataset) -> Result<CleanReport, PreprocessError> {
    let records: Vec<_> = ds
        .records
        .iter()
        .filter(|r| r.is_finite())
        .cloned()
        .collect();
    if records.is_empty() {
        return Err(PreprocessError::AllRecordsDropped);
    }
    let removed = ds.len() - records.len();
    Ok(CleanReport {
        dataset: Dataset::new(records, ds.source_name.clone()),
        removed,
    })
}

/// Extracts the named features into a matrix, columns in the requested
/// order. The dataset must already be clean: non-finite entries are an
/// error here, never silently accepted.
pub fn select_features<F: Scalar, S: AsRef<str>>(
    ds: &Dataset,
    names: &[S],
) -> Result<FeatureMatrix<F>, PreprocessError> {
    if ds.is_empty() {
        return Err(PreprocessError::EmptyDataset);
    }
    let ids = names
        .iter()
        .map(|n| {
            FeatureId::parse(n.as_ref())
                .ok_or_else(|| PreprocessError::UnknownFeature(n.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err(PreprocessError::EmptySelection);
    }

    let mut data = Vec::with_capacity(ds.len() * ids.len());
    let mut labels = Vec::with_capacity(ds.len());
    for r in &ds.records {
        for &id in &ids {
            data.push(F::from_f64(r.feature(id)).expect("f64 into scalar"));
        }
        labels.push(r.label);
    }
    FeatureMatrix::new(
        data,
        labels,
        ids.iter().map(|id| id.name().to_string()).collect(),
    )
}

/// Per-feature standardization parameters fit on training data.
///
/// `std` entries are always > 0: a constant column stores 1 so it stays
/// inert after centering instead of dividing by zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler<F> {
    means: Vec<F>,
    stds: Vec<F>,
}

impl<F: Scalar> Scaler<F> {
    pub fn from_parts(means: Vec<F>, stds: Vec<F>) -> Scaler<F> {
        assert_eq!(means.len(), stds.len());
        Scaler { means, stds }
    }

    pub fn means(&self) -> &[F] {
        &self.means
    }

    pub fn stds(&self) -> &[F] {
        &self.stds
    }

    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    /// Standardizes one raw feature vector.
    pub fn transform_row(&self, x: &[F]) -> Result<Vec<F>, PreprocessError> {
        if x.len() != self.means.len() {
            return Err(PreprocessError::DimensionMismatch {
                expected: self.means.len(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(&v, (&m, &s))| (v - m) / s)
            .collect())
    }
}

/// Per-column mean and population standard deviation of the training rows.
pub fn fit_scaler<F: Scalar>(train: &FeatureMatrix<F>) -> Scaler<F> {
    let n = F::from_usize(train.n_rows()).expect("row count fits scalar");
    let k = train.n_cols();
    let mut means = vec![F::zero(); k];
    for row in train.rows() {
        for (m, &v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut stds = vec![F::zero(); k];
    for row in train.rows() {
        for ((s, &v), &m) in stds.iter_mut().zip(row).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    for s in &mut stds {
        *s = (*s / n).sqrt();
        if *s <= F::zero() {
            *s = F::one();
        }
    }
    Scaler { means, stds }
}

/// Standardizes every entry as `(x − mean) / std`; labels are unchanged.
pub fn apply_scaler<F: Scalar>(
    scaler: &Scaler<F>,
    m: &FeatureMatrix<F>,
) -> Result<FeatureMatrix<F>, PreprocessError> {
    if scaler.n_features() != m.n_cols() {
        return Err(PreprocessError::DimensionMismatch {
            expected: scaler.n_features(),
            found: m.n_cols(),
        });
    }
    let mut data = Vec::with_capacity(m.n_rows() * m.n_cols());
    for row in m.rows() {
        data.extend(scaler.transform_row(row)?);
    }
    FeatureMatrix::new(data, m.labels.clone(), m.feature_names.clone())
}

/// Undoes [`apply_scaler`]: `x = z·std + mean`. Provided for tests.
pub fn invert_scaler<F: Scalar>(
    scaler: &Scaler<F>,
    m: &FeatureMatrix<F>,
) -> Result<FeatureMatrix<F>, PreprocessError> {
    if scaler.n_features() != m.n_cols() {
        return Err(PreprocessError::DimensionMismatch {
            expected: scaler.n_features(),
            found: m.n_cols(),
        });
    }
    let mut data = Vec::with_capacity(m.n_rows() * m.n_cols());
    for row in m.rows() {
        for (&z, (&mean, &std)) in row.iter().zip(scaler.means.iter().zip(&scaler.stds)) {
            data.push(z * std + mean);
        }
    }
    FeatureMatrix::new(data, m.labels.clone(), m.feature_names.clone())
}

/// Train/test split configuration. Defaults: 80/20, seed 42, stratified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    /// Fraction of rows assigned to the test half, in (0, 1).
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> SplitConfig {
        SplitConfig {
            test_fraction: 0.2,
            seed: 42,
            stratified: true,
        }
    }
}

// ceil(n · f) with a guard against float products landing a hair above an
// exact integer (e.g. 0.2 · some n).
fn test_row_count(n: usize, fraction: f64) -> usize {
    let product = n as f64 * fraction;
    let nearest = product.round();
    if (product - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        product.ceil() as usize
    }
}

// floor/ceil with the same near-integer guard as `test_row_count`.
fn guarded(x: f64) -> f64 {
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        nearest
    } else {
        x
    }
}

// Largest-remainder allocation of `total` test rows over the present
// classes, constrained so every class keeps at least one row on each side
// AND stays within ±1 of its proportional share. When those constraints
// cannot all hold, the split is rejected rather than silently skewed.
fn allocate_stratified(
    class_sizes: &[(Label, usize)],
    total: usize,
    fraction: f64,
) -> Result<Vec<usize>, PreprocessError> {
    let smallest = class_sizes
        .iter()
        .copied()
        .min_by_key(|&(_, n)| n)
        .expect("at least one class");
    let too_small = || PreprocessError::ClassTooSmall {
        label: smallest.0,
        count: smallest.1,
    };
    for &(label, n) in class_sizes {
        if n < 2 {
            return Err(PreprocessError::ClassTooSmall { label, count: n });
        }
    }

    let n_classes = class_sizes.len();
    let mut alloc: Vec<usize> = Vec::with_capacity(n_classes);
    let mut lower: Vec<usize> = Vec::with_capacity(n_classes);
    let mut upper: Vec<usize> = Vec::with_capacity(n_classes);
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(n_classes);
    for (slot, &(_, n)) in class_sizes.iter().enumerate() {
        let ideal = n as f64 * fraction;
        let lo = (guarded(ideal - 1.0).ceil().max(1.0)) as usize;
        let hi_proportional = guarded(ideal + 1.0).floor() as usize;
        let hi = hi_proportional.min(n - 1);
        if lo > hi {
            return Err(too_small());
        }
        lower.push(lo);
        upper.push(hi);
        let base = guarded(ideal).floor() as usize;
        alloc.push(base.clamp(lo, hi));
        remainders.push((slot, ideal - base as f64));
    }
    if lower.iter().sum::<usize>() > total || upper.iter().sum::<usize>() < total {
        return Err(too_small());
    }

    // Hand out the rounding leftovers by largest remainder, then settle the
    // exact total inside the per-class bounds.
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut assigned: usize = alloc.iter().sum();
    for &(slot, _) in &remainders {
        if assigned >= total {
            break;
        }
        if alloc[slot] < upper[slot] {
            alloc[slot] += 1;
            assigned += 1;
        }
    }
    while assigned < total {
        let slot = (0..n_classes)
            .find(|&i| alloc[i] < upper[i])
            .expect("feasible by the bound check");
        alloc[slot] += 1;
        assigned += 1;
    }
    while assigned > total {
        let slot = (0..n_classes)
            .find(|&i| alloc[i] > lower[i])
            .expect("feasible by the bound check");
        alloc[slot] -= 1;
        assigned -= 1;
    }
    Ok(alloc)
}

/// Splits rows into `(train, test)` halves.
///
/// Deterministic for a fixed seed. The test half holds ⌈n · test_fraction⌉
/// rows; a stratified split keeps each class's proportion within ±1 sample
/// and guarantees at least one test and one training row per class (error
/// otherwise). The halves are disjoint, their union is the input, and each
/// half preserves the input's row order.
pub fn train_test_split<F: Scalar>(
    m: &FeatureMatrix<F>,
    cfg: &SplitConfig,
) -> Result<(FeatureMatrix<F>, FeatureMatrix<F>), PreprocessError> {
    if !(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0) {
        return Err(PreprocessError::InvalidTestFraction(cfg.test_fraction));
    }
    let n = m.n_rows();
    let test_total = test_row_count(n, cfg.test_fraction);
    if test_total == 0 || test_total >= n {
        return Err(PreprocessError::DegenerateSplit {
            rows: n,
            test_rows: test_total,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut test_indices: Vec<usize>;
    if cfg.stratified {
        let mut groups: Vec<(Label, Vec<usize>)> = Vec::new();
        for label in Label::ALL {
            let idx: Vec<usize> = (0..n).filter(|&i| m.label(i) == label).collect();
            if !idx.is_empty() {
                groups.push((label, idx));
            }
        }
        let sizes: Vec<(Label, usize)> = groups.iter().map(|(l, idx)| (*l, idx.len())).collect();
        let alloc = allocate_stratified(&sizes, test_total, cfg.test_fraction)?;
        test_indices = Vec::with_capacity(test_total);
        for ((_, mut idx), take) in groups.into_iter().zip(alloc) {
            idx.shuffle(&mut rng);
            test_indices.extend_from_slice(&idx[..take]);
        }
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        test_indices = idx[..test_total].to_vec();
    }

    test_indices.sort_unstable();
    let mut in_test = vec![false; n];
    for &i in &test_indices {
        in_test[i] = true;
    }
    let train_indices: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
    Ok((m.select_rows(&train_indices), m.select_rows(&test_indices)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FlowRecord;

    fn record(label: Label, len_fwd: f64) -> FlowRecord {
        FlowRecord {
            destination_port: 80.0,
            flow_duration: 100.0,
            total_fwd_pkts: 1.0,
            total_bwd_pkts: 1.0,
            total_len_fwd: len_fwd,
            total_len_bwd: 10.0,
            init_win_fwd: -1.0,
            init_win_bwd: -1.0,
            label,
        }
    }

    fn dataset(n_benign: usize, n_ddos: usize) -> Dataset {
        let mut records = Vec::new();
        for i in 0..n_benign {
            records.push(record(Label::Benign, i as f64));
        }
        for i in 0..n_ddos {
            records.push(record(Label::Ddos, 1000.0 + i as f64));
        }
        Dataset::new(records, "mem")
    }

    fn matrix(n_benign: usize, n_ddos: usize) -> FeatureMatrix<f64> {
        select_features(&dataset(n_benign, n_ddos), &["total_len_fwd"]).unwrap()
    }

    #[test]
    fn clean_is_identity_on_defect_free_data() {
        let ds = dataset(3, 3);
        let report = clean(&ds).unwrap();
        assert_eq!(report.removed, 0);
        assert_eq!(report.dataset, ds);
    }

    #[test]
    fn clean_removes_injected_nan() {
        let mut ds = dataset(3, 0);
        ds.records[1].flow_duration = f64::NAN;
        let report = clean(&ds).unwrap();
        assert_eq!(report.removed, 1);
        assert_eq!(report.dataset.len(), 2);
    }

    #[test]
    fn clean_errors_when_nothing_survives() {
        let mut ds = dataset(2, 0);
        for r in &mut ds.records {
            r.total_len_bwd = f64::INFINITY;
        }
        assert!(matches!(
            clean(&ds),
            Err(PreprocessError::AllRecordsDropped)
        ));
    }

    #[test]
    fn clean_is_idempotent() {
        let mut ds = dataset(4, 4);
        ds.records[2].init_win_fwd = f64::NAN;
        let once = clean(&ds).unwrap().dataset;
        let twice = clean(&once).unwrap();
        assert_eq!(twice.dataset, once);
        assert_eq!(twice.removed, 0);
    }

    #[test]
    fn select_default_features_matches_canonical_row() {
        let ds = Dataset::new(
            vec![FlowRecord {
                destination_port: 53.0,
                flow_duration: 83718.0,
                total_fwd_pkts: 4.0,
                total_bwd_pkts: 2.0,
                total_len_fwd: 184.0,
                total_len_bwd: 300.0,
                init_win_fwd: -1.0,
                init_win_bwd: -1.0,
                label: Label::Benign,
            }],
            "mem",
        );
        let names: Vec<&str> = FeatureId::DEFAULT.iter().map(|f| f.name()).collect();
        let m = select_features::<f64, _>(&ds, &names).unwrap();
        assert_eq!(m.row(0), &[184.0, 300.0, -1.0, -1.0]);
        assert_eq!(m.feature_names()[0], "total_len_fwd");
    }

    #[test]
    fn select_all_eight_features() {
        let names: Vec<&str> = FeatureId::ALL.iter().map(|f| f.name()).collect();
        let m = select_features::<f64, _>(&dataset(2, 2), &names).unwrap();
        assert_eq!(m.n_cols(), 8);
    }

    #[test]
    fn select_unknown_feature_errors() {
        match select_features::<f64, _>(&dataset(2, 2), &["bogus"]) {
            Err(PreprocessError::UnknownFeature(name)) => assert_eq!(name, "bogus"),
            other => panic!("expected UnknownFeature, got {other:?}"),
        }
    }

    #[test]
    fn select_rejects_non_finite_entries() {
        let mut ds = dataset(2, 2);
        ds.records[3].total_len_fwd = f64::NAN;
        assert!(matches!(
            select_features::<f64, _>(&ds, &["total_len_fwd"]),
            Err(PreprocessError::NonFinite { row: 3, .. })
        ));
    }

    #[test]
    fn scaler_hand_arithmetic() {
        let m = FeatureMatrix::new(
            vec![0.0, 10.0],
            vec![Label::Benign, Label::Ddos],
            vec!["x".into()],
        )
        .unwrap();
        let s = fit_scaler(&m);
        assert_eq!(s.means(), &[5.0]);
        assert_eq!(s.stds(), &[5.0]);
        assert_eq!(s.transform_row(&[10.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn scaler_constant_column_stores_unit_std() {
        let m = FeatureMatrix::new(
            vec![7.0, 7.0, 7.0],
            vec![Label::Benign, Label::Ddos, Label::Benign],
            vec!["x".into()],
        )
        .unwrap();
        let s = fit_scaler(&m);
        assert_eq!(s.means(), &[7.0]);
        assert_eq!(s.stds(), &[1.0]);
    }

    #[test]
    fn scaler_single_row_stores_unit_std() {
        let m = FeatureMatrix::new(
            vec![3.0, -4.0],
            vec![Label::Ddos],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let s = fit_scaler(&m);
        assert_eq!(s.stds(), &[1.0, 1.0]);
    }

    #[test]
    fn standardization_identity() {
        let m = matrix(10, 10);
        let s = fit_scaler(&m);
        let z = apply_scaler(&s, &m).unwrap();
        let zs = fit_scaler(&z);
        assert!(zs.means()[0].abs() < 1e-9);
        // Constant columns come back with std replaced by 1.
        assert!((zs.stds()[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn apply_scaler_dimension_mismatch() {
        let m = matrix(3, 3);
        let s = Scaler::from_parts(vec![0.0; 3], vec![1.0; 3]);
        assert!(matches!(
            apply_scaler(&s, &m),
            Err(PreprocessError::DimensionMismatch {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn scale_then_unscale_round_trips() {
        let m = matrix(20, 20);
        let s = fit_scaler(&m);
        let z = apply_scaler(&s, &m).unwrap();
        let back = invert_scaler(&s, &z).unwrap();
        for (orig, rec) in m.rows().zip(back.rows()) {
            for (&a, &b) in orig.iter().zip(rec) {
                let scale = a.abs().max(1.0);
                assert!((a - b).abs() / scale < 1e-12);
            }
        }
    }

    #[test]
    fn split_exact_proportions_for_balanced_classes() {
        let m = matrix(50, 50);
        let (train, test) = train_test_split(&m, &SplitConfig::default()).unwrap();
        assert_eq!(test.n_rows(), 20);
        assert_eq!(train.n_rows(), 80);
        assert_eq!(test.class_counts(), [10, 10]);
        assert_eq!(train.class_counts(), [40, 40]);
    }

    #[test]
    fn split_is_deterministic_for_fixed_seed() {
        let m = matrix(37, 23);
        let cfg = SplitConfig {
            test_fraction: 0.3,
            seed: 7,
            stratified: true,
        };
        let (tr1, te1) = train_test_split(&m, &cfg).unwrap();
        let (tr2, te2) = train_test_split(&m, &cfg).unwrap();
        assert_eq!(tr1, tr2);
        assert_eq!(te1, te2);
    }

    #[test]
    fn split_halves_are_disjoint_and_exhaustive() {
        let m = matrix(31, 17);
        let cfg = SplitConfig {
            test_fraction: 0.25,
            seed: 3,
            stratified: true,
        };
        let (train, test) = train_test_split(&m, &cfg).unwrap();
        assert_eq!(train.n_rows() + test.n_rows(), m.n_rows());
        assert_eq!(test.n_rows(), (48.0_f64 * 0.25).ceil() as usize);
        // Row payloads are unique in this fixture, so multiset equality
        // proves disjointness + exhaustiveness.
        let mut seen: Vec<f64> = train.rows().chain(test.rows()).map(|r| r[0]).collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected: Vec<f64> = m.rows().map(|r| r[0]).collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(seen, expected);
    }

    #[test]
    fn split_single_ddos_sample_is_rejected() {
        let m = matrix(9, 1);
        match train_test_split(&m, &SplitConfig::default()) {
            Err(PreprocessError::ClassTooSmall { label, count }) => {
                assert_eq!(label, Label::Ddos);
                assert_eq!(count, 1);
            }
            other => panic!("expected ClassTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn split_guarantees_one_test_row_per_class() {
        // 2 DDoS rows among 98 benign: proportional allocation would give
        // the attack class zero test rows.
        let m = matrix(98, 2);
        let cfg = SplitConfig {
            test_fraction: 0.1,
            seed: 9,
            stratified: true,
        };
        let (train, test) = train_test_split(&m, &cfg).unwrap();
        assert_eq!(test.class_counts()[1], 1);
        assert_eq!(train.class_counts()[1], 1);
    }

    #[test]
    fn split_invalid_fraction_errors() {
        let m = matrix(5, 5);
        for f in [0.0, 1.0, -0.2, 1.5] {
            let cfg = SplitConfig {
                test_fraction: f,
                ..SplitConfig::default()
            };
            assert!(matches!(
                train_test_split(&m, &cfg),
                Err(PreprocessError::InvalidTestFraction(_))
            ));
        }
    }

    #[test]
    fn split_unstratified_sizes_follow_ceil_rule() {
        let m = matrix(7, 6);
        let cfg = SplitConfig {
            test_fraction: 0.33,
            seed: 1,
            stratified: false,
        };
        let (train, test) = train_test_split(&m, &cfg).unwrap();
        assert_eq!(test.n_rows(), (13.0_f64 * 0.33).ceil() as usize);
        assert_eq!(train.n_rows(), 13 - test.n_rows());
    }

    #[test]
    fn split_preserves_row_order_within_halves() {
        let m = matrix(20, 20);
        let (train, test) = train_test_split(&m, &SplitConfig::default()).unwrap();
        for half in [&train, &test] {
            let benign: Vec<f64> = half
                .rows()
                .zip(half.labels())
                .filter(|(_, l)| **l == Label::Benign)
                .map(|(r, _)| r[0])
                .collect();
            let mut sorted = benign.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(benign, sorted);
        }
    }
}
