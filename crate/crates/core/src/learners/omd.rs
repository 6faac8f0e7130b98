//! Optimistic mirror descent with the entropy regularizer, used as an
//! equivalence oracle for the multiplicative-weights learner: on identical
//! input streams the two produce the same iterates.
//!
//! Both the play step and the feedback step are Bregman argmins
//! `argmin_w eta <c, w> + KL(w, g)`; they are solved here in closed form
//! through the KKT system in log space, a deliberately different numerical
//! route from the multiplicative update it cross-checks.

use crate::error::{Error, Result};
use crate::types::{ContextSpace, CostMatrix, Strategy};

#[derive(Debug, Clone)]
pub struct Omd {
    eta: f64,
    contexts: ContextSpace,
    actions: usize,
    rho: Vec<Strategy>,
    psi: Vec<CostMatrix>,
}

/// `argmin_{w in simplex} eta <c, w> + KL(w, g)`, via the stationarity
/// condition `ln w[l] = ln g[l] - eta c[l] - lambda` with `lambda` fixed by
/// normalization (a log-sum-exp).
fn entropic_argmin(g: &[f64], costs: &[f64], eta: f64) -> Result<Strategy> {
    let logits: Vec<f64> = g
        .iter()
        .zip(costs)
        .map(|(gl, cl)| {
            if *gl > 0.0 {
                gl.ln() - eta * cl
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let peak = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !peak.is_finite() {
        return Err(Error::invalid("entropic argmin over an empty support"));
    }
    let lambda = peak + logits.iter().map(|l| (l - peak).exp()).sum::<f64>().ln();
    Strategy::new(logits.iter().map(|l| (l - lambda).exp()).collect())
}

impl Omd {
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
            rho: vec![Strategy::uniform(actions); m],
            psi: vec![CostMatrix::zeros(d, actions); m],
        })
    }

    /// The mirror-descent play for a predicted context.
    pub fn act(&self, predicted: usize) -> Result<Strategy> {
        let zhat = self.contexts.vector(predicted)?;
        let costs = self.psi[predicted].transpose_dot(zhat)?;
        entropic_argmin(&self.rho[predicted], &costs, self.eta)
    }

    /// Bregman step on the realized context's anchor, then the optimism
    /// table is replaced by the observed matrix.
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
        self.rho[realized] = entropic_argmin(&self.rho[realized], &costs, self.eta)?;
        self.psi[realized] = phi.clone();
        Ok(())
    }

    /// One full round: play on the prediction, then absorb the feedback.
    pub fn act_update(
        &mut self,
        predicted: usize,
        realized: usize,
        phi: &CostMatrix,
        z: &[f64],
    ) -> Result<Strategy> {
        let played = self.act(predicted)?;
        self.update(realized, phi, z)?;
        Ok(played)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{Learner, Pomwu};

    #[test]
    fn zero_cost_stream_stays_uniform() {
        let contexts = ContextSpace::new(vec![vec![1.0], vec![-1.0]]).unwrap();
        let mut omd = Omd::new(0.4, 3, contexts).unwrap();
        let phi = CostMatrix::zeros(1, 3);
        for t in 0..20 {
            let w = omd.act_update(t % 2, t % 2, &phi, &[1.0]).unwrap();
            for k in 0..3 {
                assert!((w[k] - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matches_multiplicative_weights_on_a_short_stream() {
        let contexts = ContextSpace::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let mut omd = Omd::new(0.7, 2, contexts.clone()).unwrap();
        let mut mwu = Pomwu::new(0.7, 2, contexts).unwrap();
        let phis = [
            CostMatrix::from_columns(vec![vec![0.9, -0.1], vec![0.2, 0.3]]).unwrap(),
            CostMatrix::from_columns(vec![vec![-0.5, 0.4], vec![0.1, -0.8]]).unwrap(),
        ];
        let zs = [[1.0, 0.0], [0.0, 1.0]];
        for t in 0..40 {
            let predicted = (t * 3) % 2;
            let realized = t % 2;
            let expected = mwu.act(predicted).unwrap();
            let got = omd.act_update(predicted, realized, &phis[realized], &zs[realized]).unwrap();
            for k in 0..2 {
                assert!((expected[k] - got[k]).abs() < 1e-12);
            }
            mwu.update(realized, &phis[realized], &zs[realized]).unwrap();
        }
    }
}
