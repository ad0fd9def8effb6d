//! Linear soft-margin SVM trained in the primal by seeded stochastic
//! subgradient descent (Pegasos-style, step 1/(λt)).
//!
//! Labels map BENIGN → −1 and DDoS → +1; the objective is
//! `(λ/2)·‖w‖² + mean hinge(1 − y·(w·x + b))` with an unregularized bias.
//! The full objective is evaluated at every epoch boundary and the
//! best-scoring snapshot becomes the returned model, so the final model's
//! objective equals the best seen during training.

use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::flow::Label;
use crate::preprocess::FeatureMatrix;
use crate::scalar::Scalar;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams<F> {
    /// L2 regularization strength λ; must be positive (the step size is
    /// 1/(λt)).
    pub lambda: F,
    pub epochs: usize,
    pub seed: u64,
}

impl<F: Scalar> Default for SvmParams<F> {
    fn default() -> SvmParams<F> {
        SvmParams {
            lambda: F::from_config(1e-4),
            epochs: 100,
            seed: 42,
        }
    }
}

impl<F: Scalar> SvmParams<F> {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.lambda <= F::zero() || !self.lambda.is_finite() {
            return Err(ModelError::InvalidHyperparam(format!(
                "lambda must be positive for the 1/(λt) step, got {}",
                self.lambda
            )));
        }
        if self.epochs == 0 {
            return Err(ModelError::InvalidHyperparam(
                "epochs must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Separating hyperplane `w·x + b = 0` in the standardized feature space.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel<F> {
    pub weights: Vec<F>,
    pub bias: F,
    pub params: SvmParams<F>,
}

impl<F: Scalar> SvmModel<F> {
    /// Signed distance proxy `w·x + b`.
    pub fn decision(&self, x: &[F]) -> Result<F, ModelError> {
        if x.len() != self.weights.len() {
            return Err(ModelError::DimensionMismatch {
                expected: self.weights.len(),
                found: x.len(),
            });
        }
        Ok(dot(&self.weights, x) + self.bias)
    }

    /// DDoS iff `w·x + b > 0`; a point exactly on the hyperplane is BENIGN.
    pub fn predict(&self, x: &[F]) -> Result<Label, ModelError> {
        Ok(if self.decision(x)? > F::zero() {
            Label::Ddos
        } else {
            Label::Benign
        })
    }
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn signed_target<F: Scalar>(label: Label) -> F {
    match label {
        Label::Benign => -F::one(),
        Label::Ddos => F::one(),
    }
}

/// Full SVM objective `(λ/2)·‖w‖² + mean hinge loss` on a matrix.
pub fn objective<F: Scalar>(m: &FeatureMatrix<F>, w: &[F], b: F, lambda: F) -> F {
    let n = F::from_usize(m.n_rows()).unwrap();
    let hinge: F = m
        .rows()
        .zip(m.labels())
        .map(|(row, &label)| {
            let margin = signed_target::<F>(label) * (dot(w, row) + b);
            (F::one() - margin).max(F::zero())
        })
        .sum::<F>()
        / n;
    w.iter().map(|&v| v * v).sum::<F>() * lambda / F::from_config(2.0) + hinge
}

/// Trains the SVM. Deterministic for a fixed seed: the only randomness is
/// the per-epoch visit order, drawn from a seeded ChaCha stream.
pub fn train<F: Scalar>(
    train_data: &FeatureMatrix<F>,
    params: &SvmParams<F>,
) -> Result<SvmModel<F>, ModelError> {
    params.validate()?;
    if let Some(label) = train_data.single_class() {
        return Err(ModelError::SingleClass(label));
    }

    let n = train_data.n_rows();
    let k = train_data.n_cols();
    let lambda = params.lambda;

    let mut w = vec![F::zero(); k];
    let mut b = F::zero();
    let mut best_objective = objective(train_data, &w, b, lambda);
    let mut best = (w.clone(), b);

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..n).collect();
    // Shifted 1/(λt) schedule: starting the clock at t₀ ≈ 1/λ caps the
    // first step near 1, which keeps the unregularized bias stable for
    // small λ while matching the 1/(λt) decay asymptotically.
    let shift = (1.0 / params.lambda.to_f64().unwrap()).ceil() as u64;
    let mut t: u64 = shift;

    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = F::one() / (lambda * F::from_u64(t).unwrap());
            let row = train_data.row(i);
            let y = signed_target::<F>(train_data.label(i));
            let violated = y * (dot(&w, row) + b) < F::one();

            let shrink = F::one() - eta * lambda;
            for wj in &mut w {
                *wj *= shrink;
            }
            if violated {
                for (wj, &xj) in w.iter_mut().zip(row) {
                    *wj += eta * y * xj;
                }
                b += eta * y;
            }
        }
        let obj = objective(train_data, &w, b, lambda);
        if obj < best_objective {
            best_objective = obj;
            best = (w.clone(), b);
        }
    }

    Ok(SvmModel {
        weights: best.0,
        bias: best.1,
        params: *params,
    })
}
