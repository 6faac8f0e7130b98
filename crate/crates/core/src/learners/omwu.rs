//! Context-blind optimistic multiplicative weights baseline.
//!
//! A single weight vector and a single optimism term shared by all contexts:
//! the optimism is the most recent realized cost vector `Phi^T z`. When the
//! run has one context this coincides with the prediction-aware learner.

use crate::error::{Error, Result};
use crate::learners::{stabilized_weights, Learner};
use crate::types::{CostMatrix, Strategy};

#[derive(Debug, Clone)]
pub struct Omwu {
    eta: f64,
    rho: Strategy,
    /// Last observed per-action cost vector `Phi^T z` (zero before any feedback).
    optimism: Vec<f64>,
}

impl Omwu {
    pub fn new(eta: f64, actions: usize) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::invalid(format!("learning rate must be positive, got {eta}")));
        }
        if actions == 0 {
            return Err(Error::invalid("action count must be positive"));
        }
        Ok(Self { eta, rho: Strategy::uniform(actions), optimism: vec![0.0; actions] })
    }

    pub fn rho(&self) -> &Strategy {
        &self.rho
    }
}

impl Learner for Omwu {
    fn act(&mut self, _predicted: usize) -> Result<Strategy> {
        let exponents: Vec<f64> = self.optimism.iter().map(|c| -self.eta * c).collect();
        stabilized_weights(&self.rho, &exponents)
    }

    fn update(&mut self, _realized: usize, phi: &CostMatrix, z: &[f64]) -> Result<()> {
        if phi.actions() != self.rho.len() {
            return Err(Error::DimensionMismatch {
                what: "feedback cost matrix actions".into(),
                expected: self.rho.len(),
                actual: phi.actions(),
            });
        }
        let costs = phi.transpose_dot(z)?;
        let exponents: Vec<f64> = costs.iter().map(|c| -self.eta * c).collect();
        self.rho = stabilized_weights(&self.rho, &exponents)?;
        self.optimism = costs;
        Ok(())
    }

    fn eta(&self) -> f64 {
        self.eta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_costs_return_to_uniform_after_two_updates() {
        let mut learner = Omwu::new(0.5, 2).unwrap();
        let phi_a = CostMatrix::from_columns(vec![vec![1.0], vec![0.0]]).unwrap();
        let phi_b = CostMatrix::from_columns(vec![vec![0.0], vec![1.0]]).unwrap();
        learner.update(0, &phi_a, &[1.0]).unwrap();
        learner.update(0, &phi_b, &[1.0]).unwrap();
        let rho = learner.rho();
        assert!((rho[0] - 0.5).abs() < 1e-15);
        assert!((rho[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_cost_stream_stays_uniform() {
        let mut learner = Omwu::new(0.5, 3).unwrap();
        let phi = CostMatrix::zeros(2, 3);
        for _ in 0..50 {
            learner.update(0, &phi, &[1.0, -1.0]).unwrap();
            let w = learner.act(0).unwrap();
            for k in 0..3 {
                assert!((w[k] - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }
}
