//! Optimistic multiplicative weights with predicted contexts.
//!
//! One weight vector `rho_z` and one optimism matrix `Psi_z` per context.
//! Acting reads only the predicted context's tables; the feedback update
//! touches only the realized context's tables.

use crate::error::{Error, Result};
use crate::learners::{stabilized_weights, Learner};
use crate::types::{ContextSpace, CostMatrix, Strategy};

/// Per-context state of the prediction-aware optimistic MWU learner.
///
/// Initialization: every `rho_z` uniform, every `Psi_z` zero. The weight
/// vectors are kept normalized after every update; normalization cancels in
/// the play ratio and prevents underflow over long runs.
#[derive(Debug, Clone)]
pub struct Pomwu {
    eta: f64,
    contexts: ContextSpace,
    actions: usize,
    rho: Vec<Strategy>,
    psi: Vec<CostMatrix>,
}

impl Pomwu {
    pub fn new(eta: f64, actions: usize, contexts: ContextSpace) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::invalid(format!("learning rate must be positive, got {eta}")));
        }
        if actions == 0 {
            return Err(Error::invalid("action count must be positive"));
        }
        let m = contexts.len();
        let d = contexts.dim();
        Ok(Self {
            eta,
            contexts,
            actions,
            rho: vec![Strategy::uniform(actions); m],
            psi: vec![CostMatrix::zeros(d, actions); m],
        })
    }

    pub fn num_actions(&self) -> usize {
        self.actions
    }

    /// Weight vector of one context (normalized).
    pub fn rho(&self, context: usize) -> Result<&Strategy> {
        self.rho
            .get(context)
            .ok_or(Error::ContextIndex { index: context, m: self.rho.len() })
    }

    /// Optimism matrix of one context.
    pub fn psi(&self, context: usize) -> Result<&CostMatrix> {
        self.psi
            .get(context)
            .ok_or(Error::ContextIndex { index: context, m: self.psi.len() })
    }

    fn check_feedback(&self, realized: usize, phi: &CostMatrix, z: &[f64]) -> Result<()> {
        if realized >= self.contexts.len() {
            return Err(Error::ContextIndex { index: realized, m: self.contexts.len() });
        }
        if phi.dim() != self.contexts.dim() || phi.actions() != self.actions {
            return Err(Error::DimensionMismatch {
                what: "feedback cost matrix".into(),
                expected: self.contexts.dim() * self.actions,
                actual: phi.dim() * phi.actions(),
            });
        }
        if z.len() != self.contexts.dim() {
            return Err(Error::DimensionMismatch {
                what: "realized context vector".into(),
                expected: self.contexts.dim(),
                actual: z.len(),
            });
        }
        Ok(())
    }
}

impl Learner for Pomwu {
    /// `w[l] ∝ rho_zhat[l] * exp(-eta <column l of Psi_zhat, zhat>)`.
    fn act(&mut self, predicted: usize) -> Result<Strategy> {
        let zhat = self.contexts.vector(predicted)?;
        let costs = self.psi[predicted].transpose_dot(zhat)?;
        let exponents: Vec<f64> = costs.iter().map(|c| -self.eta * c).collect();
        stabilized_weights(&self.rho[predicted], &exponents)
    }

    /// `Psi_z <- Phi` and `rho_z <- normalize(rho_z . exp(-eta Phi^T z))`.
    fn update(&mut self, realized: usize, phi: &CostMatrix, z: &[f64]) -> Result<()> {
        self.check_feedback(realized, phi, z)?;
        let costs = phi.transpose_dot(z)?;
        let exponents: Vec<f64> = costs.iter().map(|c| -self.eta * c).collect();
        self.rho[realized] = stabilized_weights(&self.rho[realized], &exponents)?;
        self.psi[realized] = phi.clone();
        Ok(())
    }

    fn eta(&self) -> f64 {
        self.eta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_contexts() -> ContextSpace {
        ContextSpace::new(vec![vec![1.0], vec![2.0]]).unwrap()
    }

    #[test]
    fn zero_optimism_plays_uniform() {
        let mut learner = Pomwu::new(0.7, 3, two_contexts()).unwrap();
        let w = learner.act(0).unwrap();
        for k in 0..3 {
            assert!((w[k] - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn act_matches_hand_evaluated_formula() {
        // K = 2, d = 1, zhat = (1), eta = 0.5, rho uniform, exponent args (1, 0):
        // w = (e^{-0.5}, 1) / (e^{-0.5} + 1)
        let contexts = ContextSpace::new(vec![vec![1.0]]).unwrap();
        let mut learner = Pomwu::new(0.5, 2, contexts).unwrap();
        let phi = CostMatrix::from_columns(vec![vec![1.0], vec![0.0]]).unwrap();
        // Plant the optimism table through a real update, then undo rho by hand:
        // easier to update and act at a second, fresh learner state.
        learner.psi[0] = phi;
        let w = learner.act(0).unwrap();
        let e = (-0.5f64).exp();
        assert!((w[0] - e / (e + 1.0)).abs() < 1e-12);
        assert!((w[1] - 1.0 / (e + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn update_matches_one_multiplicative_step() {
        // From uniform rho, eta = 0.5, Phi^T z = (1, 0):
        // rho_z = (e^{-0.5}, 1) / (e^{-0.5} + 1)
        let contexts = ContextSpace::new(vec![vec![1.0]]).unwrap();
        let mut learner = Pomwu::new(0.5, 2, contexts).unwrap();
        let phi = CostMatrix::from_columns(vec![vec![1.0], vec![0.0]]).unwrap();
        learner.update(0, &phi, &[1.0]).unwrap();
        let rho = learner.rho(0).unwrap();
        let e = (-0.5f64).exp();
        assert!((rho[0] - e / (e + 1.0)).abs() < 1e-12);
        assert!((rho[1] - 1.0 / (e + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn constant_cost_shift_leaves_weights_unchanged() {
        let contexts = ContextSpace::new(vec![vec![1.0]]).unwrap();
        let mut learner = Pomwu::new(0.5, 2, contexts).unwrap();
        let phi = CostMatrix::from_columns(vec![vec![0.3], vec![0.3]]).unwrap();
        learner.update(0, &phi, &[1.0]).unwrap();
        let rho = learner.rho(0).unwrap();
        assert!((rho[0] - 0.5).abs() < 1e-15);
        assert!((rho[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn update_touches_only_the_realized_context() {
        let mut learner = Pomwu::new(0.5, 2, two_contexts()).unwrap();
        let phi = CostMatrix::from_columns(vec![vec![1.0], vec![-1.0]]).unwrap();
        learner.update(0, &phi, &[1.0]).unwrap();
        let rho1 = learner.rho(1).unwrap().to_vec();
        let psi1 = learner.psi(1).unwrap().clone();
        assert_eq!(rho1, vec![0.5, 0.5]);
        assert_eq!(psi1, CostMatrix::zeros(1, 2));
        // And predicting the untouched context stays uniform.
        let w = learner.act(1).unwrap();
        assert_eq!(w.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn invalid_indices_and_shapes_error() {
        let mut learner = Pomwu::new(0.5, 2, two_contexts()).unwrap();
        assert!(learner.act(2).is_err());
        let phi = CostMatrix::from_columns(vec![vec![1.0], vec![0.0]]).unwrap();
        assert!(learner.update(5, &phi, &[1.0]).is_err());
        let wrong = CostMatrix::from_columns(vec![vec![1.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(learner.update(0, &wrong, &[1.0]).is_err());
        assert!(learner.update(0, &phi, &[1.0, 2.0]).is_err());
    }
}
