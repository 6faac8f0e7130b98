//! Exponential-weights aggregation over a supplied set of expert predictors.
//!
//! Each round the aggregator samples an expert with probability proportional
//! to `exp(-eta * mistakes)` and follows its advice; after the context is
//! revealed, every mistaken expert's loss is incremented. The expert set is
//! caller-supplied: advice vectors come in, one index goes out.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ExpertHedge {
    eta: f64,
    /// Cumulative mistake counts, one per expert.
    losses: Vec<f64>,
    rng: ChaCha12Rng,
    pending_advice: Option<Vec<usize>>,
}

impl ExpertHedge {
    /// Aggregator over `num_experts` experts with an explicit rate.
    pub fn new(num_experts: usize, eta: f64, rng: ChaCha12Rng) -> Result<Self> {
        if num_experts == 0 {
            return Err(Error::invalid("expert set must be nonempty"));
        }
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::invalid(format!("hedge rate must be nonnegative, got {eta}")));
        }
        Ok(Self { eta, losses: vec![0.0; num_experts], rng, pending_advice: None })
    }

    /// The default rate `sqrt(8 ln N / T)` for a known horizon.
    pub fn with_horizon(num_experts: usize, horizon: usize, rng: ChaCha12Rng) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon must be positive"));
        }
        let eta = (8.0 * (num_experts as f64).ln() / horizon as f64).sqrt();
        Self::new(num_experts, eta, rng)
    }

    /// Normalized expert weights `exp(-eta * losses)`.
    pub fn weights(&self) -> Vec<f64> {
        let peak = self.losses.iter().cloned().fold(f64::INFINITY, f64::min);
        let raw: Vec<f64> = self.losses.iter().map(|l| (-self.eta * (l - peak)).exp()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    /// Samples an expert by its exponential mistake weight and returns that
    /// expert's advice.
    pub fn predict(&mut self, advice: &[usize]) -> Result<usize> {
        if advice.len() != self.losses.len() {
            return Err(Error::DimensionMismatch {
                what: "expert advice list".into(),
                expected: self.losses.len(),
                actual: advice.len(),
            });
        }
        let weights = self.weights();
        let draw: f64 = self.rng.random();
        let mut cumulative = 0.0;
        let mut chosen = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            cumulative += w;
            if draw < cumulative {
                chosen = i;
                break;
            }
        }
        self.pending_advice = Some(advice.to_vec());
        Ok(advice[chosen])
    }

    /// Increments the loss of every expert whose last advice was wrong.
    pub fn update(&mut self, realized: usize) -> Result<()> {
        let advice = self
            .pending_advice
            .take()
            .ok_or_else(|| Error::Protocol("update called before predict in this round".into()))?;
        for (loss, a) in self.losses.iter_mut().zip(&advice) {
            if *a != realized {
                *loss += 1.0;
            }
        }
        Ok(())
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}
