//! Online context predictors producing the per-round signals `zhat^j_t`.
//!
//! The engine-facing predictors (oracle, fixed-error noisy, online logistic
//! regression) implement [`ContextPredictor`]. The multiclass online
//! classification machinery (finite hypothesis classes, the version-space
//! algorithm and expert aggregation) lives in [`littlestone`] and [`hedge`]
//! and is driven directly over discrete covariate streams.

mod hedge;
mod littlestone;
mod logistic;

pub use hedge::ExpertHedge;
pub use littlestone::{littlestone_dim, FiniteHypothesisClass, Soa};
pub use logistic::LogisticModel;

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// What a predictor may look at before the round is played.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    /// The true context index of the round. Only the oracle-style predictors
    /// read it at prediction time.
    pub true_context: usize,
    /// Covariates for supervised predictors, when the context process emits
    /// them.
    pub covariate: Option<&'a [f64]>,
}

/// An online context predictor: predict before the round, learn from the
/// revealed context after it.
pub trait ContextPredictor: Send {
    fn predict(&mut self, obs: &Observation) -> Result<usize>;
    fn update(&mut self, obs: &Observation, realized: usize) -> Result<()>;
}

/// Perfect predictor: always returns the true context, so the misprediction
/// count of any trace it produces is zero.
#[derive(Debug, Clone, Default)]
pub struct OraclePredictor;

impl ContextPredictor for OraclePredictor {
    fn predict(&mut self, obs: &Observation) -> Result<usize> {
        Ok(obs.true_context)
    }

    fn update(&mut self, _obs: &Observation, _realized: usize) -> Result<()> {
        Ok(())
    }
}

/// Controlled-error predictor: returns the true context with probability
/// `1 - error_rate`, otherwise a uniform draw over the other `m - 1`
/// contexts. Deterministic given its seeded generator.
#[derive(Debug, Clone)]
pub struct NoisyPredictor {
    error_rate: f64,
    num_contexts: usize,
    rng: ChaCha12Rng,
}

impl NoisyPredictor {
    pub fn new(error_rate: f64, num_contexts: usize, rng: ChaCha12Rng) -> Result<Self> {
        if !(0.0..=1.0).contains(&error_rate) {
            return Err(Error::invalid(format!(
                "error rate must lie in [0, 1], got {error_rate}"
            )));
        }
        if error_rate > 0.0 && num_contexts < 2 {
            return Err(Error::invalid(
                "a positive error rate requires at least two contexts",
            ));
        }
        Ok(Self { error_rate, num_contexts, rng })
    }
}

impl ContextPredictor for NoisyPredictor {
    fn predict(&mut self, obs: &Observation) -> Result<usize> {
        if self.error_rate == 0.0 {
            return Ok(obs.true_context);
        }
        let flip: f64 = self.rng.random();
        if flip >= self.error_rate {
            return Ok(obs.true_context);
        }
        let offset = self.rng.random_range(1..self.num_contexts);
        Ok((obs.true_context + offset) % self.num_contexts)
    }

    fn update(&mut self, _obs: &Observation, _realized: usize) -> Result<()> {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn oracle_is_the_identity() {
        let mut oracle = OraclePredictor;
        for z in 0..5 {
            let obs = Observation { true_context: z, covariate: None };
            assert_eq!(oracle.predict(&obs).unwrap(), z);
        }
    }

    #[test]
    fn noisy_zero_rate_is_the_identity() {
        let rng = ChaCha12Rng::seed_from_u64(1);
        let mut p = NoisyPredictor::new(0.0, 4, rng).unwrap();
        for t in 0..200 {
            let obs = Observation { true_context: t % 4, covariate: None };
            assert_eq!(p.predict(&obs).unwrap(), t % 4);
        }
    }

    #[test]
    fn noisy_full_rate_with_two_contexts_always_flips() {
        let rng = ChaCha12Rng::seed_from_u64(2);
        let mut p = NoisyPredictor::new(1.0, 2, rng).unwrap();
        for t in 0..200 {
            let truth = t % 2;
            let obs = Observation { true_context: truth, covariate: None };
            assert_eq!(p.predict(&obs).unwrap(), 1 - truth);
        }
    }

    #[test]
    fn noisy_rate_matches_monte_carlo() {
        let rng = ChaCha12Rng::seed_from_u64(3);
        let mut p = NoisyPredictor::new(0.2, 3, rng).unwrap();
        let trials = 100_000;
        let mut errors = 0usize;
        for t in 0..trials {
            let truth = t % 3;
            let obs = Observation { true_context: truth, covariate: None };
            if p.predict(&obs).unwrap() != truth {
                errors += 1;
            }
        }
        let rate = errors as f64 / trials as f64;
        assert!((rate - 0.2).abs() < 0.01, "empirical rate {rate}");
    }

    #[test]
    fn noisy_rejects_degenerate_setup() {
        let rng = ChaCha12Rng::seed_from_u64(4);
        assert!(NoisyPredictor::new(0.5, 1, rng.clone()).is_err());
        assert!(NoisyPredictor::new(-0.1, 3, rng.clone()).is_err());
        assert!(NoisyPredictor::new(1.5, 3, rng).is_err());
    }

    #[test]
    fn seeded_predictors_replay_identically() {
        let mk = || NoisyPredictor::new(0.3, 4, ChaCha12Rng::seed_from_u64(9)).unwrap();
        let mut a = mk();
        let mut b = mk();
        for t in 0..500 {
            let obs = Observation { true_context: t % 4, covariate: None };
            assert_eq!(a.predict(&obs).unwrap(), b.predict(&obs).unwrap());
        }
    }
}
