//! The contextual external-to-swap-regret wrapper.
//!
//! Maintains `K` inner learners, one per action. Each round the wrapper
//! queries every inner learner for a recommendation, plays a fixed point of
//! the resulting column-stochastic matrix, and feeds inner learner `k` the
//! observed cost matrix scaled by the played weight of action `k`.

use crate::error::{Error, Result};
use crate::learners::{Learner, Pomwu};
use crate::types::{ContextSpace, CostMatrix, Strategy};

/// Residual tolerance of the fixed-point contract `||P w - w||_inf`.
pub const FIXED_POINT_TOL: f64 = 1e-10;
/// Iteration cap of the damped power iteration.
pub const FIXED_POINT_MAX_ITERS: usize = 100_000;

// The iteration itself targets a tighter residual so that downstream
// inequalities do not inherit the full contract slack per round.
const FIXED_POINT_TARGET: f64 = 1e-13;

/// A fixed point of a column-stochastic matrix, by damped power iteration on
/// `(P + I) / 2` started from uniform. Damping makes the chain aperiodic, so
/// the iteration converges even for permutation matrices; among multiple
/// fixed points it returns the one this iteration converges to, which is
/// deterministic given `P`.
pub fn stationary_distribution(columns: &[Strategy]) -> Result<Strategy> {
    let k = columns.len();
    if k == 0 {
        return Err(Error::invalid("recommendation matrix must have at least one column"));
    }
    for (i, col) in columns.iter().enumerate() {
        if col.len() != k {
            return Err(Error::DimensionMismatch {
                what: format!("recommendation column {i}"),
                expected: k,
                actual: col.len(),
            });
        }
    }
    let mut w = vec![1.0 / k as f64; k];
    let mut next = vec![0.0; k];
    let mut residual = f64::INFINITY;
    for iteration in 0..FIXED_POINT_MAX_ITERS {
        // next = P w
        next.iter_mut().for_each(|x| *x = 0.0);
        for (col, wk) in columns.iter().zip(&w) {
            for (row, p) in col.iter().enumerate() {
                next[row] += p * wk;
            }
        }
        residual = w
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual <= FIXED_POINT_TARGET {
            return Strategy::new(w);
        }
        // w <- (P w + w) / 2
        for (wk, nk) in w.iter_mut().zip(&next) {
            *wk = 0.5 * (*wk + *nk);
        }
        let _ = iteration;
    }
    if residual <= FIXED_POINT_TOL {
        return Strategy::new(w);
    }
    Err(Error::FixedPointDivergence { residual, iterations: FIXED_POINT_MAX_ITERS })
}

/// Per-round cache: the recommendation matrix and the played fixed point.
#[derive(Debug, Clone)]
struct RoundCache {
    recommendations: Vec<Strategy>,
    play: Strategy,
}

/// Swap-regret learner wrapping `K` independent per-action inner learners.
#[derive(Debug, Clone)]
pub struct BlumMansour {
    inner: Vec<Pomwu>,
    cache: Option<RoundCache>,
}

impl BlumMansour {
    /// One inner prediction-aware learner per action, each with the full
    /// per-context tables.
    pub fn new(eta: f64, actions: usize, contexts: ContextSpace) -> Result<Self> {
        let inner = (0..actions)
            .map(|_| Pomwu::new(eta, actions, contexts.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { inner, cache: None })
    }

    /// The inner recommendations and fixed point of the last `act`, if an
    /// act is pending an update.
    pub fn last_round(&self) -> Option<(&[Strategy], &Strategy)> {
        self.cache.as_ref().map(|c| (c.recommendations.as_slice(), &c.play))
    }

    pub fn inner(&self) -> &[Pomwu] {
        &self.inner
    }
}

impl Learner for BlumMansour {
    fn act(&mut self, predicted: usize) -> Result<Strategy> {
        let recommendations: Vec<Strategy> = self
            .inner
            .iter_mut()
            .map(|learner| learner.act(predicted))
            .collect::<Result<_>>()?;
        let play = stationary_distribution(&recommendations)?;
        self.cache = Some(RoundCache { recommendations, play: play.clone() });
        Ok(play)
    }

    /// Feeds inner learner `k` the cost matrix scaled by `w_t[k]`. A zero
    /// weight still counts as an update with the zero matrix.
    fn update(&mut self, realized: usize, phi: &CostMatrix, z: &[f64]) -> Result<()> {
        let cache = self
            .cache
            .take()
            .ok_or_else(|| Error::Protocol("update called before act in this round".into()))?;
        for (k, learner) in self.inner.iter_mut().enumerate() {
            let scaled = phi.scale(cache.play[k]);
            learner.update(realized, &scaled, z)?;
        }
        Ok(())
    }

    fn eta(&self) -> f64 {
        self.inner[0].eta()
    }
}
