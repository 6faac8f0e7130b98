//! Play algorithms: the prediction-aware optimistic multiplicative-weights
//! learner, its context-blind baseline, the swap-regret wrapper, and the
//! mirror-descent / FTRL formulations used as cross-validation oracles.

mod blum_mansour;
mod oftrl;
mod omd;
mod omwu;
mod pomwu;

pub use blum_mansour::{stationary_distribution, BlumMansour, FIXED_POINT_MAX_ITERS, FIXED_POINT_TOL};
pub use oftrl::Oftrl;
pub use omd::Omd;
pub use omwu::Omwu;
pub use pomwu::Pomwu;

use crate::error::Result;
use crate::types::{CostMatrix, Strategy};

/// A per-agent online learner over `K` actions.
///
/// Acting must not change what a subsequent `act` would return; `update`
/// consumes the round's feedback `(z_t, Phi^j_t)`. A single learner is owned
/// by one agent and must not be updated concurrently with its own act.
pub trait Learner: Send {
    /// The strategy for this round given the predicted context index.
    fn act(&mut self, predicted: usize) -> Result<Strategy>;

    /// Consumes the feedback of the round: the realized context (index and
    /// vector) and the observed expected cost matrix.
    fn update(&mut self, realized: usize, phi: &CostMatrix, z: &[f64]) -> Result<()>;

    /// The learning rate in use (for run metadata and bound audits).
    fn eta(&self) -> f64;
}

/// Named learning-rate presets. The Theta-constants of the underlying
/// statements are exposed as an explicit multiplier (default 1), and the
/// unknowable misprediction bound as a user-supplied `l_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaPreset {
    /// `eta = c * J^{-1/2} T^{-1/4} [ln K (L_bar + m)]^{1/4}`
    Individual { multiplier: f64, l_bar: f64 },
    /// `eta = 1 / (4 (J - 1))`; requires `J >= 2`.
    SumOfRegrets,
    /// `eta = c * sqrt(ln K (L_bar + m) / (L_bar + T))`
    Adversarial { multiplier: f64, l_bar: f64 },
}

impl EtaPreset {
    /// Resolves the preset to a concrete learning rate for a run shape.
    pub fn resolve(&self, agents: usize, actions: usize, contexts: usize, rounds: usize) -> Result<f64> {
        let k = actions as f64;
        let m = contexts as f64;
        let t = rounds as f64;
        let j = agents as f64;
        let eta = match self {
            EtaPreset::Individual { multiplier, l_bar } => {
                multiplier * j.powf(-0.5) * t.powf(-0.25) * (k.ln() * (l_bar + m)).powf(0.25)
            }
            EtaPreset::SumOfRegrets => {
                if agents < 2 {
                    return Err(crate::error::Error::invalid(
                        "the sum-of-regrets preset requires at least two agents",
                    ));
                }
                1.0 / (4.0 * (j - 1.0))
            }
            EtaPreset::Adversarial { multiplier, l_bar } => {
                multiplier * (k.ln() * (l_bar + m) / (l_bar + t)).sqrt()
            }
        };
        if !(eta.is_finite() && eta > 0.0) {
            return Err(crate::error::Error::invalid(format!(
                "preset resolved to a non-positive learning rate ({eta})"
            )));
        }
        Ok(eta)
    }
}

/// `w[k] ∝ base[k] * exp(exponent[k])`, computed with max-exponent
/// subtraction so extreme rates cannot overflow to NaN.
pub(crate) fn stabilized_weights(base: &[f64], exponent: &[f64]) -> Result<Strategy> {
    debug_assert_eq!(base.len(), exponent.len());
    let shift = exponent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shift = if shift.is_finite() { shift } else { 0.0 };
    let weights: Vec<f64> = base
        .iter()
        .zip(exponent)
        .map(|(b, e)| b * (e - shift).exp())
        .collect();
    Strategy::new(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve_to_stated_formulas() {
        let eta = EtaPreset::SumOfRegrets.resolve(3, 2, 1, 100).unwrap();
        assert!((eta - 1.0 / 8.0).abs() < 1e-15);
        assert!(EtaPreset::SumOfRegrets.resolve(1, 2, 1, 100).is_err());

        let eta = EtaPreset::Individual { multiplier: 1.0, l_bar: 0.0 }
            .resolve(4, 2, 3, 10_000)
            .unwrap();
        let expected = 0.5 * (10_000f64).powf(-0.25) * (2f64.ln() * 3.0).powf(0.25);
        assert!((eta - expected).abs() < 1e-15);

        let eta = EtaPreset::Adversarial { multiplier: 2.0, l_bar: 5.0 }
            .resolve(2, 3, 2, 50)
            .unwrap();
        let expected = 2.0 * (3f64.ln() * 7.0 / 55.0).sqrt();
        assert!((eta - expected).abs() < 1e-15);
    }

    #[test]
    fn stabilized_weights_survive_huge_exponents() {
        let w = stabilized_weights(&[0.5, 0.5], &[-4000.0, 4000.0]).unwrap();
        assert!(w.is_valid());
        assert!(w[1] > 0.999_999);
    }
}
