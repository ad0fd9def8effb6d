//! Seeded synthetic flow datasets.
//!
//! The generator reproduces the signal real DDoS traffic shows in this
//! feature space: attack flows repeat almost the same byte counts
//! (small spread), while legitimate clients request wildly different
//! resources (large spread). Draws are truncated-at-zero normals per
//! feature, class-conditional, fully determined by the seed.
//!
//! [`generate_separable`] additionally builds a two-blob fixture with a
//! known witness hyperplane that classifies it perfectly, used to
//! acceptance-test the classifiers.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, StandardNormal};
use thiserror::Error;

use crate::flow::{Dataset, FeatureId, FlowRecord, Label};
use crate::preprocess::FeatureMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

/// Class-conditional location/spread of one feature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureProfile {
    pub benign_mean: f64,
    pub benign_spread: f64,
    pub ddos_mean: f64,
    pub ddos_spread: f64,
}

/// Well-known service ports sampled for benign flows. Attack flows always
/// target port 80.
const BENIGN_PORTS: [f64; 4] = [53.0, 80.0, 443.0, 445.0];
const DDOS_PORT: f64 = 80.0;

/// Configuration for [`generate`]. Defaults mimic the magnitudes of real
/// flow exports: attack locations sit near observed DDoS rows
/// (`total_len_fwd` ≈ 44 bytes, `init_win_bwd` ≈ 229) with 10–50× smaller
/// spread than the benign side. These are fixture choices, not corpus
/// statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_benign: usize,
    pub n_ddos: usize,
    pub seed: u64,
    /// In [0, 1]: 0 keeps the class locations fully apart, 1 moves the
    /// attack locations onto the benign ones (only the spreads then differ).
    pub overlap: f64,
    /// Profiles for the seven normal-drawn features (every feature except
    /// the destination port), in [`FeatureId::ALL`] order.
    pub profiles: Vec<(FeatureId, FeatureProfile)>,
}

impl Default for SynthConfig {
    fn default() -> SynthConfig {
        let p = |benign_mean, benign_spread, ddos_mean, ddos_spread| FeatureProfile {
            benign_mean,
            benign_spread,
            ddos_mean,
            ddos_spread,
        };
        SynthConfig {
            n_benign: 1000,
            n_ddos: 1000,
            seed: 42,
            overlap: 0.25,
            profiles: vec![
                (
                    FeatureId::FlowDuration,
                    p(5_000_000.0, 4_000_000.0, 60_000.0, 9_000.0),
                ),
                (FeatureId::TotalFwdPkts, p(20.0, 14.0, 6.0, 2.0)),
                (FeatureId::TotalBwdPkts, p(18.0, 13.0, 5.0, 2.0)),
                (FeatureId::TotalLenFwd, p(3_000.0, 2_600.0, 44.0, 11.0)),
                (
                    FeatureId::TotalLenBwd,
                    p(15_000.0, 12_500.0, 11_604.0, 40.0),
                ),
                (FeatureId::InitWinFwd, p(12_000.0, 9_500.0, 700.0, 150.0)),
                (FeatureId::InitWinBwd, p(900.0, 650.0, 229.0, 8.0)),
            ],
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_benign + self.n_ddos == 0 {
            return Err(SynthError::InvalidConfig(
                "n_benign + n_ddos must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.overlap) || !self.overlap.is_finite() {
            return Err(SynthError::InvalidConfig(format!(
                "overlap {} outside [0, 1]",
                self.overlap
            )));
        }
        for (feature, p) in &self.profiles {
            for (name, value) in [
                ("benign_mean", p.benign_mean),
                ("benign_spread", p.benign_spread),
                ("ddos_mean", p.ddos_mean),
                ("ddos_spread", p.ddos_spread),
            ] {
                if !value.is_finite() {
                    return Err(SynthError::InvalidConfig(format!(
                        "{feature}.{name} is not finite"
                    )));
                }
                if name.ends_with("spread") && value < 0.0 {
                    return Err(SynthError::InvalidConfig(format!(
                        "{feature}.{name} must be ≥ 0, got {value}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn profile_mut(&mut self, id: FeatureId) -> Option<&mut FeatureProfile> {
        self.profiles
            .iter_mut()
            .find(|(f, _)| *f == id)
            .map(|(_, p)| p)
    }

    /// Applies `key = value` overrides. Scalar keys: `n_benign`, `n_ddos`,
    /// `seed`, `overlap`. Per-feature keys:
    /// `<feature>.{benign_mean,benign_spread,ddos_mean,ddos_spread}`.
    /// Blank lines and `#` comments are skipped.
    pub fn apply_config(&mut self, text: &str) -> Result<(), SynthError> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                SynthError::InvalidConfig(format!("expected `key = value`, got `{line}`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad_number =
                || SynthError::InvalidConfig(format!("`{value}` is not a number (key {key})"));
            match key {
                "n_benign" => self.n_benign = value.parse().map_err(|_| bad_number())?,
                "n_ddos" => self.n_ddos = value.parse().map_err(|_| bad_number())?,
                "seed" => self.seed = value.parse().map_err(|_| bad_number())?,
                "overlap" => self.overlap = value.parse().map_err(|_| bad_number())?,
                _ => {
                    let (feature_name, param) = key
                        .split_once('.')
                        .ok_or_else(|| SynthError::InvalidConfig(format!("unknown key `{key}`")))?;
                    let feature = FeatureId::parse(feature_name).ok_or_else(|| {
                        SynthError::InvalidConfig(format!("unknown feature `{feature_name}`"))
                    })?;
                    let profile = self.profile_mut(feature).ok_or_else(|| {
                        SynthError::InvalidConfig(format!(
                            "feature `{feature_name}` has no profile"
                        ))
                    })?;
                    let slot = match param {
                        "benign_mean" => &mut profile.benign_mean,
                        "benign_spread" => &mut profile.benign_spread,
                        "ddos_mean" => &mut profile.ddos_mean,
                        "ddos_spread" => &mut profile.ddos_spread,
                        _ => {
                            return Err(SynthError::InvalidConfig(format!(
                                "unknown profile key `{param}`"
                            )));
                        }
                    };
                    *slot = value.parse().map_err(|_| bad_number())?;
                }
            }
        }
        Ok(())
    }
}

fn draw_record(
    cfg: &SynthConfig,
    label: Label,
    rng: &mut ChaCha8Rng,
) -> Result<FlowRecord, SynthError> {
    let port = match label {
        Label::Ddos => DDOS_PORT,
        Label::Benign => BENIGN_PORTS[rng.random_range(0..BENIGN_PORTS.len())],
    };
    let mut record = FlowRecord {
        destination_port: port,
        flow_duration: 0.0,
        total_fwd_pkts: 0.0,
        total_bwd_pkts: 0.0,
        total_len_fwd: 0.0,
        total_len_bwd: 0.0,
        init_win_fwd: 0.0,
        init_win_bwd: 0.0,
        label,
    };
    for (feature, p) in &cfg.profiles {
        let (mean, spread) = match label {
            Label::Benign => (p.benign_mean, p.benign_spread),
            // `overlap` slides the attack location toward the benign one.
            Label::Ddos => (
                p.ddos_mean + cfg.overlap * (p.benign_mean - p.ddos_mean),
                p.ddos_spread,
            ),
        };
        let normal = Normal::new(mean, spread)
            .map_err(|e| SynthError::InvalidConfig(format!("{feature}: {e}")))?;
        let value = normal.sample(rng).max(0.0).round();
        match feature {
            FeatureId::FlowDuration => record.flow_duration = value,
            FeatureId::TotalFwdPkts => record.total_fwd_pkts = value,
            FeatureId::TotalBwdPkts => record.total_bwd_pkts = value,
            FeatureId::TotalLenFwd => record.total_len_fwd = value,
            FeatureId::TotalLenBwd => record.total_len_bwd = value,
            FeatureId::InitWinFwd => record.init_win_fwd = value,
            FeatureId::InitWinBwd => record.init_win_bwd = value,
            FeatureId::DestinationPort => {}
        }
    }
    Ok(record)
}

/// Generates a labeled dataset: the attack phase first (`n_ddos` rows),
/// then the benign phase. Deterministic for a fixed seed; class counts are
/// exactly as requested.
pub fn generate(cfg: &SynthConfig) -> Result<Dataset, SynthError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut records = Vec::with_capacity(cfg.n_benign + cfg.n_ddos);
    for _ in 0..cfg.n_ddos {
        records.push(draw_record(cfg, Label::Ddos, &mut rng)?);
    }
    for _ in 0..cfg.n_benign {
        records.push(draw_record(cfg, Label::Benign, &mut rng)?);
    }
    Ok(Dataset::new(records, format!("synth(seed={})", cfg.seed)))
}

/// A separable two-feature fixture plus the hyperplane that witnesses its
/// separability.
#[derive(Debug, Clone)]
pub struct SeparableBlobs<F> {
    pub matrix: FeatureMatrix<F>,
    pub witness_weights: Vec<F>,
    pub witness_bias: F,
}

// Per-coordinate draws are clamped to ±3σ, so with centers
// (margin + 6σ) apart along the witness direction no point can cross the
// midpoint hyperplane: the witness is perfect by construction.
const BLOB_SPREAD: f64 = 1.0;
const BLOB_CLAMP: f64 = 3.0;

fn blob_points(
    n_per_class: usize,
    margin: f64,
    seed: u64,
) -> Result<(Vec<[f64; 2]>, Vec<Label>), SynthError> {
    if margin <= 0.0 || !margin.is_finite() {
        return Err(SynthError::InvalidConfig(format!(
            "margin must be positive, got {margin}"
        )));
    }
    if n_per_class == 0 {
        return Err(SynthError::InvalidConfig(
            "n_per_class must be positive".into(),
        ));
    }
    let direction = [1.0 / 2.0_f64.sqrt(), 1.0 / 2.0_f64.sqrt()];
    let distance = margin + 6.0 * BLOB_SPREAD;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(2 * n_per_class);
    let mut labels = Vec::with_capacity(2 * n_per_class);
    for (label, sign) in [(Label::Benign, -1.0), (Label::Ddos, 1.0)] {
        for _ in 0..n_per_class {
            let mut point = [0.0f64; 2];
            for (coord, dir) in point.iter_mut().zip(direction) {
                let z: f64 = rng.sample(StandardNormal);
                let z = z.clamp(-BLOB_CLAMP, BLOB_CLAMP);
                *coord = sign * dir * distance / 2.0 + BLOB_SPREAD * z;
            }
            points.push(point);
            labels.push(label);
        }
    }
    Ok((points, labels))
}

/// Two Gaussian blobs (one per class, `σ = 1`, draws clamped at 3σ) whose
/// centers sit `margin + 6σ` apart along the diagonal witness direction.
/// The returned witness hyperplane classifies every row correctly.
pub fn generate_separable<F: Scalar>(
    n_per_class: usize,
    margin: f64,
    seed: u64,
) -> Result<SeparableBlobs<F>, SynthError> {
    let (points, labels) = blob_points(n_per_class, margin, seed)?;
    let mut data = Vec::with_capacity(points.len() * 2);
    for p in &points {
        data.push(F::from_f64(p[0]).unwrap());
        data.push(F::from_f64(p[1]).unwrap());
    }
    let matrix = FeatureMatrix::new(data, labels, vec!["f0".into(), "f1".into()])
        .expect("blob fixture is well-formed");
    let dir = F::from_f64(1.0 / 2.0_f64.sqrt()).unwrap();
    Ok(SeparableBlobs {
        matrix,
        witness_weights: vec![dir, dir],
        witness_bias: F::zero(),
    })
}

/// The separable fixture embedded into flow records: blob coordinates land
/// in `total_len_fwd` / `total_len_bwd` (scaled and shifted to valid byte
/// counts), every other feature is constant. Lets the CLI train on a
/// dataset that is separable by construction.
pub fn separable_flows(n_per_class: usize, margin: f64, seed: u64) -> Result<Dataset, SynthError> {
    let (points, labels) = blob_points(n_per_class, margin, seed)?;
    let scale = 4000.0;
    let offset = scale * (margin / 2.0 + 3.0 * BLOB_CLAMP + 1.0);
    let records = points
        .iter()
        .zip(labels)
        .map(|(p, label)| FlowRecord {
            destination_port: DDOS_PORT,
            flow_duration: 1000.0,
            total_fwd_pkts: 10.0,
            total_bwd_pkts: 10.0,
            total_len_fwd: (offset + scale * p[0]).round(),
            total_len_bwd: (offset + scale * p[1]).round(),
            init_win_fwd: 8192.0,
            init_win_bwd: 8192.0,
            label,
        })
        .collect();
    Ok(Dataset::new(
        records,
        format!("separable(margin={margin},seed={seed})"),
    ))
}
