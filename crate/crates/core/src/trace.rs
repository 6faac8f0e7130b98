//! The full per-round record of a finished run: the single input every
//! metric is computed from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{expected_cost, ContextSpace, CostMatrix, Strategy};

/// Everything observable about one round.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundRecord {
    /// 1-based round index.
    pub t: usize,
    /// Realized context index.
    pub context: usize,
    /// Per-agent predicted context index.
    pub predicted: Vec<usize>,
    /// Per-agent played strategy.
    pub strategies: Vec<Strategy>,
    /// Per-agent expected cost matrix `Phi^j_t`.
    pub cost_matrices: Vec<CostMatrix>,
    /// Per-agent realized expected cost `<z_t, Phi^j_t w^j_t>`.
    pub costs: Vec<f64>,
}

/// Static description of one agent's configuration, kept for bound audits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentMeta {
    pub learner: String,
    pub predictor: String,
    pub eta: f64,
}

/// Run-level metadata recorded alongside the rounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub master_seed: u64,
    pub game: String,
    pub agents: Vec<AgentMeta>,
    pub shared_predictions: bool,
    /// Factor applied to payoffs at construction to enforce the unit cost
    /// bound (1 when the game already satisfied it).
    pub normalization_factor: f64,
}

/// A finished run: the context space, shape constants, the ordered round
/// records and the run metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trace {
    pub schema_version: u32,
    pub contexts: ContextSpace,
    pub num_agents: usize,
    pub num_actions: usize,
    pub payoff_dim: usize,
    pub records: Vec<RoundRecord>,
    pub metadata: RunMetadata,
}

impl Trace {
    /// Horizon `T`.
    pub fn rounds(&self) -> usize {
        self.records.len()
    }

    pub fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.num_agents {
            return Err(Error::invalid(format!(
                "agent index {agent} out of range (J = {})",
                self.num_agents
            )));
        }
        Ok(())
    }

    /// The rounds at which each context occurred: `occurrences[z]` lists
    /// record indices in time order.
    pub fn context_occurrences(&self) -> Vec<Vec<usize>> {
        let mut occ = vec![Vec::new(); self.contexts.len()];
        for (i, r) in self.records.iter().enumerate() {
            occ[r.context].push(i);
        }
        occ
    }

    /// Per-action realized cost vector `Phi^j_t^T z_t` of one record.
    pub fn action_costs(&self, record: usize, agent: usize) -> Result<Vec<f64>> {
        let r = &self.records[record];
        let z = self.contexts.vector(r.context)?;
        r.cost_matrices[agent].transpose_dot(z)
    }

    /// Verifies internal consistency: shapes, index ranges, and that every
    /// stored cost equals the recomputed bilinear form within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for (i, r) in self.records.iter().enumerate() {
            if r.t != i + 1 {
                return Err(Error::invalid(format!("record {i} has round index {}", r.t)));
            }
            if r.context >= self.contexts.len() {
                return Err(Error::ContextIndex { index: r.context, m: self.contexts.len() });
            }
            let sizes_ok = r.predicted.len() == self.num_agents
                && r.strategies.len() == self.num_agents
                && r.cost_matrices.len() == self.num_agents
                && r.costs.len() == self.num_agents;
            if !sizes_ok {
                return Err(Error::invalid(format!("record {i} has inconsistent agent counts")));
            }
            let z = self.contexts.vector(r.context)?;
            for j in 0..self.num_agents {
                if r.predicted[j] >= self.contexts.len() {
                    return Err(Error::ContextIndex { index: r.predicted[j], m: self.contexts.len() });
                }
                let recomputed = expected_cost(&r.cost_matrices[j], &r.strategies[j], z)?;
                if (recomputed - r.costs[j]).abs() > tol {
                    return Err(Error::invalid(format!(
                        "record {i}, agent {j}: stored cost {} differs from recomputed {recomputed}",
                        r.costs[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tiny_trace() -> Trace {
        let contexts = ContextSpace::new(vec![vec![1.0]]).unwrap();
        let phi = CostMatrix::from_columns(vec![vec![1.0], vec![0.0]]).unwrap();
        let w = Strategy::uniform(2);
        let cost = expected_cost(&phi, &w, &[1.0]).unwrap();
        Trace {
            schema_version: 1,
            contexts,
            num_agents: 1,
            num_actions: 2,
            payoff_dim: 1,
            records: vec![RoundRecord {
                t: 1,
                context: 0,
                predicted: vec![0],
                strategies: vec![w],
                cost_matrices: vec![phi],
                costs: vec![cost],
            }],
            metadata: RunMetadata {
                master_seed: 0,
                game: "test".into(),
                agents: vec![AgentMeta { learner: "pomwu".into(), predictor: "oracle".into(), eta: 0.5 }],
                shared_predictions: false,
                normalization_factor: 1.0,
            },
        }
    }

    #[test]
    fn validate_accepts_consistent_traces() {
        tiny_trace().validate(1e-12).unwrap();
    }

    #[test]
    fn validate_catches_cost_drift() {
        let mut trace = tiny_trace();
        trace.records[0].costs[0] += 1e-6;
        assert!(trace.validate(1e-12).is_err());
    }
}
