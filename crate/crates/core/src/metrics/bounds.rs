//! Right-hand sides of the regret inequalities, evaluated exactly as
//! stated so traces can be audited against them.
//!
//! Path sums are context-specific with the boundary convention matching the
//! learner's initialization: the cost matrix before a context's first
//! occurrence is the zero matrix, the strategy before it is uniform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::misprediction_count;
use crate::trace::Trace;
use crate::types::Strategy;

/// A bound audit passes when `slack = rhs - observed >= -BOUND_SLACK_TOL`.
pub const BOUND_SLACK_TOL: f64 = 1e-9;

/// One audited inequality instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheck {
    /// Agent the check applies to; `None` for aggregate checks.
    pub agent: Option<usize>,
    pub observed: f64,
    pub bound: f64,
    pub slack: f64,
    pub satisfied: bool,
}

impl BoundCheck {
    pub fn new(agent: Option<usize>, observed: f64, bound: f64) -> Self {
        let slack = bound - observed;
        Self { agent, observed, bound, slack, satisfied: slack >= -BOUND_SLACK_TOL }
    }
}

/// A named family of checks (one proposition-style audit).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub checks: Vec<BoundCheck>,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, checks: Vec<BoundCheck>) -> Self {
        let satisfied = checks.iter().all(|c| c.satisfied);
        Self { name: name.into(), checks, satisfied }
    }
}

/// One round of a single learner's stream, reduced to what the bounds need.
#[derive(Debug, Clone)]
pub struct StreamRound {
    pub context: usize,
    pub predicted: usize,
    /// Realized per-action cost vector `Phi_t^T z_t`.
    pub costs: Vec<f64>,
    pub play: Strategy,
}

fn linf(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// The contextual RVU right-hand side over an explicit stream:
///
/// `((5 + ln K) L + m ln K) / eta + eta (phi_path + 4 L) - w_path / (16 eta)`
///
/// where `phi_path` sums, per context, the squared max-norms of consecutive
/// realized cost-vector differences and `w_path` the squared l1 norms of
/// consecutive strategy differences.
pub fn rvu_bound_rhs_stream(
    num_contexts: usize,
    num_actions: usize,
    rounds: &[StreamRound],
    eta: f64,
) -> Result<f64> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::invalid(format!("eta must be positive, got {eta}")));
    }
    let k = num_actions as f64;
    let m = num_contexts as f64;
    let mispredictions = rounds.iter().filter(|r| r.predicted != r.context).count() as f64;

    let mut phi_path = 0.0;
    let mut w_path = 0.0;
    let uniform = Strategy::uniform(num_actions);
    let mut prev_costs: Vec<Option<&[f64]>> = vec![None; num_contexts];
    let mut prev_play: Vec<&Strategy> = vec![&uniform; num_contexts];
    let zero = vec![0.0; num_actions];
    for r in rounds {
        if r.context >= num_contexts {
            return Err(Error::ContextIndex { index: r.context, m: num_contexts });
        }
        let prev = prev_costs[r.context].unwrap_or(&zero);
        phi_path += linf(r.costs.iter().zip(prev).map(|(a, b)| a - b)).powi(2);
        let prev = prev_play[r.context];
        let l1: f64 = r.play.iter().zip(prev.iter()).map(|(a, b)| (a - b).abs()).sum();
        w_path += l1 * l1;
        prev_costs[r.context] = Some(&r.costs);
        prev_play[r.context] = &r.play;
    }

    Ok(((5.0 + k.ln()) * mispredictions + m * k.ln()) / eta
        + eta * (phi_path + 4.0 * mispredictions)
        - w_path / (16.0 * eta))
}

/// Extracts one agent's stream from a trace.
pub fn agent_stream(trace: &Trace, agent: usize) -> Result<Vec<StreamRound>> {
    trace.check_agent(agent)?;
    (0..trace.records.len())
        .map(|i| {
            let r = &trace.records[i];
            Ok(StreamRound {
                context: r.context,
                predicted: r.predicted[agent],
                costs: trace.action_costs(i, agent)?,
                play: r.strategies[agent].clone(),
            })
        })
        .collect()
}

/// The per-agent contextual RVU bound right-hand side.
pub fn rvu_bound_rhs(trace: &Trace, agent: usize, eta: f64) -> Result<f64> {
    let stream = agent_stream(trace, agent)?;
    rvu_bound_rhs_stream(trace.contexts.len(), trace.num_actions, &stream, eta)
}

/// The sum-of-regrets right-hand side
/// `4J [(5 + ln K) L_T + mJ ln K] + L_T / (J - 1)`,
/// valid when every agent ran the prediction-aware learner at
/// `eta = 1 / (4(J - 1))`.
pub fn sum_regret_bound_rhs(trace: &Trace) -> Result<f64> {
    let j = trace.num_agents;
    if j < 2 {
        return Err(Error::BoundPremise("sum-of-regrets bound requires J >= 2".into()));
    }
    let required = 1.0 / (4.0 * (j as f64 - 1.0));
    for (idx, agent) in trace.metadata.agents.iter().enumerate() {
        if agent.learner != "pomwu" {
            return Err(Error::BoundPremise(format!(
                "agent {idx} ran '{}', the bound applies to pomwu self-play",
                agent.learner
            )));
        }
        if (agent.eta - required).abs() > 1e-12 {
            return Err(Error::BoundPremise(format!(
                "agent {idx} used eta = {}, the bound requires 1/(4(J-1)) = {required}",
                agent.eta
            )));
        }
    }
    let total_mispredictions: usize = (0..j)
        .map(|a| misprediction_count(trace, a))
        .sum::<Result<usize>>()?;
    let l = total_mispredictions as f64;
    let jf = j as f64;
    let k = trace.num_actions as f64;
    let m = trace.contexts.len() as f64;
    Ok(4.0 * jf * ((5.0 + k.ln()) * l + m * jf * k.ln()) + l / (jf - 1.0))
}

/// The individual-regret right-hand side
/// `((5 + ln K) Lbar + m ln K) / eta + eta [(J-1)^2 (9 T eta^2 + 4 Lbar) + 4 Lbar]`,
/// valid in self-play with a common rate. `l_bar` must dominate every
/// agent's misprediction count.
pub fn individual_bound_rhs(trace: &Trace, agent: usize, eta: f64, l_bar: f64) -> Result<f64> {
    trace.check_agent(agent)?;
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::invalid(format!("eta must be positive, got {eta}")));
    }
    let max_l = (0..trace.num_agents)
        .map(|a| misprediction_count(trace, a))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0) as f64;
    if l_bar < max_l {
        return Err(Error::BoundPremise(format!(
            "l_bar = {l_bar} is below the observed maximum misprediction count {max_l}"
        )));
    }
    let jf = trace.num_agents as f64;
    let k = trace.num_actions as f64;
    let m = trace.contexts.len() as f64;
    let t = trace.rounds() as f64;
    Ok(((5.0 + k.ln()) * l_bar + m * k.ln()) / eta
        + eta * ((jf - 1.0).powi(2) * (9.0 * t * eta * eta + 4.0 * l_bar) + 4.0 * l_bar))
}

/// The shared-prediction right-hand side
/// `((5 + ln K) L + m ln K) / eta + 9 (J-1)^2 T eta^3 + 12 L eta`,
/// where `L` counts the rounds the (common) prediction was wrong. Errors if
/// the trace does not actually carry identical predictions across agents.
pub fn shared_bound_rhs(trace: &Trace, eta: f64) -> Result<f64> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::invalid(format!("eta must be positive, got {eta}")));
    }
    let mut shared_mispredictions = 0usize;
    for r in &trace.records {
        let first = r.predicted[0];
        if r.predicted.iter().any(|p| *p != first) {
            return Err(Error::BoundPremise(format!(
                "round {}: predictions differ across agents; the bound needs a shared signal",
                r.t
            )));
        }
        if first != r.context {
            shared_mispredictions += 1;
        }
    }
    let l = shared_mispredictions as f64;
    let jf = trace.num_agents as f64;
    let k = trace.num_actions as f64;
    let m = trace.contexts.len() as f64;
    let t = trace.rounds() as f64;
    Ok(((5.0 + k.ln()) * l + m * k.ln()) / eta
        + 9.0 * (jf - 1.0).powi(2) * t * eta.powi(3)
        + 12.0 * l * eta)
}
