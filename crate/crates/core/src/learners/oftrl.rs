//! Optimistic follow-the-regularized-leader with predicted contexts, the
//! second equivalence oracle. The leader term is the context-filtered
//! cumulative cost vector; the entropy regularizer gives the closed-form
//! softmax solution over cumulative sums, a route independent of the
//! incremental multiplicative update.

use crate::error::{Error, Result};
use crate::learners::stabilized_weights;
use crate::types::{ContextSpace, CostMatrix, Strategy};

#[derive(Debug, Clone)]
pub struct Oftrl {
    eta: f64,
    contexts: ContextSpace,
    actions: usize,
    /// Per context: the cumulative realized cost vector `sum Phi_tau^T z`.
    cumulative: Vec<Vec<f64>>,
    /// Per context: the last observed cost matrix.
    psi: Vec<CostMatrix>,
}

impl Oftrl {
    pub fn new(eta: f64, actions: usize, contexts: ContextSpace) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::invalid(format!("learning rate must be positive, got {eta}")));
        }
        let m = contexts.len();
        let d = contexts.dim();
        Ok(Self {
            eta,
            contexts,
            actions,
            cumulative: vec![vec![0.0; actions]; m],
            psi: vec![CostMatrix::zeros(d, actions); m],
        })
    }

    /// `w = argmin <C_zhat + Psi_zhat^T zhat, w> + R(w)/eta`, i.e. the
    /// softmax of `-eta` times leader-plus-optimism. An empty history with
    /// zero optimism yields the uniform strategy.
    pub fn act(&self, predicted: usize) -> Result<Strategy> {
        let zhat = self.contexts.vector(predicted)?;
        let optimism = self.psi[predicted].transpose_dot(zhat)?;
        let exponents: Vec<f64> = self.cumulative[predicted]
            .iter()
            .zip(&optimism)
            .map(|(c, o)| -self.eta * (c + o))
            .collect();
        let base = vec![1.0; self.actions];
        stabilized_weights(&base, &exponents)
    }

    pub fn update(&mut self, realized: usize, phi: &CostMatrix, z: &[f64]) -> Result<()> {
        if realized >= self.contexts.len() {
            return Err(Error::ContextIndex { index: realized, m: self.contexts.len() });
        }
        let costs = phi.transpose_dot(z)?;
        if costs.len() != self.actions {
            return Err(Error::DimensionMismatch {
                what: "feedback cost matrix actions".into(),
                expected: self.actions,
                actual: costs.len(),
            });
        }
        for (acc, c) in self.cumulative[realized].iter_mut().zip(&costs) {
            *acc += c;
        }
        self.psi[realized] = phi.clone();
        Ok(())
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}
