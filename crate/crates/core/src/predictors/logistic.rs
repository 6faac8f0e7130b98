//! Online multinomial logistic regression over dense covariates.
//!
//! Prediction is the argmax of the softmax scores `zeta(beta_z, x)`; learning
//! is one stochastic gradient step on the multinomial cross-entropy per
//! round, with step size `alpha_t = alpha_0 / sqrt(t)`.

use crate::error::{Error, Result};
use crate::predictors::{ContextPredictor, Observation};
use crate::types::dot;

#[derive(Debug, Clone)]
pub struct LogisticModel {
    /// One coefficient vector per context, each of length `b`.
    beta: Vec<Vec<f64>>,
    alpha0: f64,
    /// Number of gradient steps taken so far.
    steps: usize,
}

impl LogisticModel {
    /// Zero-initialized model for `m` contexts over covariates in `R^b`.
    pub fn new(num_contexts: usize, covariate_dim: usize, alpha0: f64) -> Result<Self> {
        if num_contexts == 0 || covariate_dim == 0 {
            return Err(Error::invalid("logistic model needs m >= 1 and b >= 1"));
        }
        if !(alpha0.is_finite() && alpha0 > 0.0) {
            return Err(Error::invalid(format!("step size must be positive, got {alpha0}")));
        }
        Ok(Self { beta: vec![vec![0.0; covariate_dim]; num_contexts], alpha0, steps: 0 })
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.beta
    }

    fn check_covariate(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.beta[0].len() {
            return Err(Error::DimensionMismatch {
                what: "covariate vector".into(),
                expected: self.beta[0].len(),
                actual: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("covariate vector".into()));
        }
        Ok(())
    }

    /// Softmax class probabilities at `x`.
    pub fn probabilities(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_covariate(x)?;
        let scores: Vec<f64> = self.beta.iter().map(|b| dot(b, x)).collect();
        let peak = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = scores.iter().map(|s| (s - peak).exp()).collect();
        let total: f64 = exps.iter().sum();
        Ok(exps.into_iter().map(|e| e / total).collect())
    }

    /// Predicted context: the highest-scoring class, ties broken by the
    /// lowest context index.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        self.check_covariate(x)?;
        let mut best = 0usize;
        let mut best_score = dot(&self.beta[0], x);
        for (z, b) in self.beta.iter().enumerate().skip(1) {
            let score = dot(b, x);
            if score > best_score {
                best = z;
                best_score = score;
            }
        }
        Ok(best)
    }

    /// Cross-entropy loss of the sample `(x, label)` under the current model.
    pub fn loss(&self, x: &[f64], label: usize) -> Result<f64> {
        let probs = self.probabilities(x)?;
        Ok(-probs[label].max(f64::MIN_POSITIVE).ln())
    }

    /// One gradient step: `beta_c <- beta_c - alpha_t (zeta_c(x) - 1{c = label}) x`.
    pub fn sgd_step(&mut self, x: &[f64], label: usize) -> Result<()> {
        if label >= self.beta.len() {
            return Err(Error::ContextIndex { index: label, m: self.beta.len() });
        }
        let probs = self.probabilities(x)?;
        self.steps += 1;
        let alpha = self.alpha0 / (self.steps as f64).sqrt();
        for (c, beta_c) in self.beta.iter_mut().enumerate() {
            let indicator = if c == label { 1.0 } else { 0.0 };
            let scale = alpha * (probs[c] - indicator);
            for (bi, xi) in beta_c.iter_mut().zip(x) {
                *bi -= scale * xi;
            }
        }
        Ok(())
    }
}

impl ContextPredictor for LogisticModel {
    fn predict(&mut self, obs: &Observation) -> Result<usize> {
        let x = obs
            .covariate
            .ok_or_else(|| Error::invalid("logistic predictor requires covariates"))?;
        LogisticModel::predict(self, x)
    }

    fn update(&mut self, obs: &Observation, realized: usize) -> Result<()> {
        let x = obs
            .covariate
            .ok_or_else(|| Error::invalid("logistic predictor requires covariates"))?;
        self.sgd_step(x, realized)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_model_breaks_ties_toward_the_lowest_index() {
        let model = LogisticModel::new(3, 2, 0.1).unwrap();
        assert_eq!(model.predict(&[0.4, -1.0]).unwrap(), 0);
    }

    #[test]
    fn dominant_coefficient_wins() {
        let mut model = LogisticModel::new(3, 4, 0.1).unwrap();
        model.beta[1] = vec![10.0, 0.0, 0.0, 0.0];
        assert_eq!(model.predict(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 1);
    }

    #[test]
    fn shared_shift_of_all_coefficients_cancels() {
        let mut model = LogisticModel::new(3, 2, 0.1).unwrap();
        model.beta = vec![vec![0.5, -0.2], vec![0.1, 0.9], vec![-0.3, 0.4]];
        let x = [0.7, 1.3];
        let before = model.predict(&x).unwrap();
        for b in model.beta.iter_mut() {
            b[0] += 2.5;
            b[1] -= 1.25;
        }
        assert_eq!(model.predict(&x).unwrap(), before);
    }

    #[test]
    fn gradient_at_zero_matches_hand_computation() {
        // m = 2, x = e_1, true class 0, beta = 0: probabilities are (1/2, 1/2),
        // so class 0 moves by +alpha/2 on coordinate 1 and class 1 by -alpha/2.
        let mut model = LogisticModel::new(2, 3, 0.1).unwrap();
        model.sgd_step(&[1.0, 0.0, 0.0], 0).unwrap();
        let alpha = 0.1; // first step: alpha_0 / sqrt(1)
        assert!((model.beta[0][0] - alpha / 2.0).abs() < 1e-15);
        assert!((model.beta[1][0] + alpha / 2.0).abs() < 1e-15);
        assert_eq!(model.beta[0][1], 0.0);
    }

    #[test]
    fn zero_covariate_changes_nothing() {
        let mut model = LogisticModel::new(3, 2, 0.1).unwrap();
        model.beta[2] = vec![0.4, -0.7];
        let before = model.beta.clone();
        model.sgd_step(&[0.0, 0.0], 1).unwrap();
        assert_eq!(model.beta, before);
    }

    #[test]
    fn analytic_gradient_matches_central_differences() {
        // Random-ish fixed (beta, x); the claimed gradient of the cross
        // entropy in beta_c is (zeta_c - 1{c = z}) x.
        let mut model = LogisticModel::new(3, 2, 0.1).unwrap();
        model.beta = vec![vec![0.3, -0.8], vec![-0.1, 0.45], vec![0.9, 0.2]];
        let x = [0.6, -1.1];
        let label = 2usize;
        let probs = model.probabilities(&x).unwrap();
        let h = 1e-6;
        for c in 0..3 {
            for i in 0..2 {
                let mut plus = model.clone();
                plus.beta[c][i] += h;
                let mut minus = model.clone();
                minus.beta[c][i] -= h;
                let numeric =
                    (plus.loss(&x, label).unwrap() - minus.loss(&x, label).unwrap()) / (2.0 * h);
                let indicator = if c == label { 1.0 } else { 0.0 };
                let analytic = (probs[c] - indicator) * x[i];
                let scale = numeric.abs().max(analytic.abs()).max(1e-8);
                assert!(
                    ((numeric - analytic) / scale).abs() < 1e-6,
                    "gradient mismatch at ({c}, {i}): numeric {numeric}, analytic {analytic}"
                );
            }
        }
    }

    #[test]
    fn small_steps_decrease_the_per_sample_loss() {
        let mut model = LogisticModel::new(4, 3, 1.0).unwrap();
        model.beta = vec![
            vec![0.2, -0.4, 0.1],
            vec![-0.6, 0.3, 0.8],
            vec![0.05, 0.0, -0.9],
            vec![0.7, 0.7, 0.2],
        ];
        let x = [0.5, -0.2, 1.4];
        let label = 1usize;
        for alpha in [1e-3, 1e-4] {
            let mut probe = model.clone();
            probe.alpha0 = alpha;
            let before = probe.loss(&x, label).unwrap();
            probe.sgd_step(&x, label).unwrap();
            let after = probe.loss(&x, label).unwrap();
            assert!(after < before, "loss did not decrease at alpha = {alpha}");
        }
    }

    #[test]
    fn non_finite_covariates_error() {
        let model = LogisticModel::new(2, 2, 0.1).unwrap();
        assert!(model.predict(&[f64::NAN, 0.0]).is_err());
        assert!(model.predict(&[1.0]).is_err());
    }
}
