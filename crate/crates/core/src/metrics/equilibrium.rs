//! Empirical joint policies and the equilibrium gaps evaluated on them.
//!
//! The gap computations here deliberately go through the mixture structure
//! of the empirical policy rather than through the regret decompositions:
//! the identity between the two routes is a theorem that the test suites
//! check numerically on every trace.

use crate::error::Result;
use crate::trace::Trace;
use crate::types::dot;

/// The per-context component of the empirical policy: either the uniform
/// mixture over the rounds in which the context occurred (kept in factored
/// form, never materializing the `K^J` joint distribution), or the uniform
/// product profile for contexts that never occurred.
#[derive(Debug, Clone, PartialEq)]
pub enum ContextMixture {
    /// Record indices of the rounds mixed with weight `1 / n_z` each.
    Mixture { rounds: Vec<usize> },
    /// `(1/K, ..., 1/K)` for every agent.
    UniformProduct,
}

/// The empirical joint policy `nu_hat_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPolicy {
    pub per_context: Vec<ContextMixture>,
}

/// Builds the empirical policy of a trace: context `z` maps to the uniform
/// mixture of the played product profiles at its occurrences, and to the
/// uniform product profile if it never occurred.
pub fn empirical_policy(trace: &Trace) -> EmpiricalPolicy {
    let per_context = trace
        .context_occurrences()
        .into_iter()
        .map(|rounds| {
            if rounds.is_empty() {
                ContextMixture::UniformProduct
            } else {
                ContextMixture::Mixture { rounds }
            }
        })
        .collect();
    EmpiricalPolicy { per_context }
}

/// Expected cost of agent `j` under the mixture at context `z`.
fn mixture_cost(trace: &Trace, rounds: &[usize], agent: usize) -> f64 {
    let total: f64 = rounds.iter().map(|&i| trace.records[i].costs[agent]).sum();
    total / rounds.len() as f64
}

/// Expected cost of agent `j` deviating to pure action `k` while everyone
/// else follows the mixture. By linearity of the cost matrix in the
/// opponents' mixture this is the average of `<z, Phi_tau e_k>`.
fn deviation_cost(trace: &Trace, rounds: &[usize], agent: usize, action: usize) -> Result<f64> {
    let mut total = 0.0;
    for &i in rounds {
        let r = &trace.records[i];
        let z = trace.contexts.vector(r.context)?;
        total += dot(r.cost_matrices[agent].column(action), z);
    }
    Ok(total / rounds.len() as f64)
}

/// The coarse-correlated equilibrium gap of the empirical policy: the
/// largest average improvement any agent could gain by deviating to a fixed
/// per-context action before recommendations are drawn.
pub fn cce_epsilon(trace: &Trace) -> Result<f64> {
    let policy = empirical_policy(trace);
    let t = trace.rounds() as f64;
    let mut worst = f64::NEG_INFINITY;
    for agent in 0..trace.num_agents {
        let mut gap = 0.0;
        for mixture in &policy.per_context {
            let rounds = match mixture {
                ContextMixture::Mixture { rounds } => rounds,
                ContextMixture::UniformProduct => continue, // never played: no mass
            };
            let held = mixture_cost(trace, rounds, agent);
            let mut best = f64::INFINITY;
            for k in 0..trace.num_actions {
                best = best.min(deviation_cost(trace, rounds, agent, k)?);
            }
            gap += rounds.len() as f64 * (held - best);
        }
        worst = worst.max(gap / t);
    }
    Ok(worst)
}

/// The correlated equilibrium gap of the empirical policy: the largest
/// average improvement any agent could gain from the best per-context swap
/// map applied to its own recommended action.
pub fn ce_epsilon(trace: &Trace) -> Result<f64> {
    let policy = empirical_policy(trace);
    let k = trace.num_actions;
    let t = trace.rounds() as f64;
    let mut worst = f64::NEG_INFINITY;
    for agent in 0..trace.num_agents {
        let mut gap = 0.0;
        for mixture in &policy.per_context {
            let rounds = match mixture {
                ContextMixture::Mixture { rounds } => rounds,
                ContextMixture::UniformProduct => continue,
            };
            // weighted[a][b] = sum over the mixture of w[a] <z, Phi e_b>
            let mut weighted = vec![vec![0.0f64; k]; k];
            for &i in rounds {
                let r = &trace.records[i];
                let costs = trace.action_costs(i, agent)?;
                for (a, wa) in r.strategies[agent].iter().enumerate() {
                    for (b, c) in costs.iter().enumerate() {
                        weighted[a][b] += wa * c;
                    }
                }
            }
            // Optimal swap map for this context.
            let swap: Vec<usize> = weighted
                .iter()
                .map(|row| {
                    let mut best = 0usize;
                    for (b, c) in row.iter().enumerate() {
                        if *c < row[best] {
                            best = b;
                        }
                    }
                    best
                })
                .collect();
            // Evaluate the mixture under the swapped recommendations.
            for &i in rounds {
                let r = &trace.records[i];
                let costs = trace.action_costs(i, agent)?;
                let mut swapped = vec![0.0f64; k];
                for (a, wa) in r.strategies[agent].iter().enumerate() {
                    swapped[swap[a]] += wa;
                }
                let before = r.costs[agent];
                let after = dot(&swapped, &costs);
                gap += before - after;
            }
        }
        worst = worst.max(gap / t);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::tests::cost_trace;
    use crate::metrics::{contextual_external_regret, contextual_swap_regret};
    use crate::types::Strategy;

    #[test]
    fn empirical_policy_structure() {
        let e1 = Strategy::pure(2, 0);
        let u = Strategy::uniform(2);
        let trace = cost_trace(
            3,
            &[(0, vec![1.0, 0.0], e1), (0, vec![0.5, 0.2], u)],
            None,
        );
        let policy = empirical_policy(&trace);
        assert_eq!(policy.per_context[0], ContextMixture::Mixture { rounds: vec![0, 1] });
        assert_eq!(policy.per_context[1], ContextMixture::UniformProduct);
        assert_eq!(policy.per_context[2], ContextMixture::UniformProduct);
    }

    #[test]
    fn single_round_policy_is_that_profile() {
        let e1 = Strategy::pure(2, 0);
        let trace = cost_trace(1, &[(0, vec![1.0, 0.0], e1)], None);
        let policy = empirical_policy(&trace);
        assert_eq!(policy.per_context[0], ContextMixture::Mixture { rounds: vec![0] });
    }

    #[test]
    fn gaps_match_the_regret_identities_on_a_fixture() {
        let u = Strategy::uniform(2);
        let e1 = Strategy::pure(2, 0);
        let trace = cost_trace(
            2,
            &[
                (0, vec![1.0, 0.0], u.clone()),
                (1, vec![0.2, 0.9], e1.clone()),
                (0, vec![0.4, 0.6], e1),
                (1, vec![0.8, 0.3], u),
            ],
            None,
        );
        let t = trace.rounds() as f64;
        let cce = cce_epsilon(&trace).unwrap();
        let expected = contextual_external_regret(&trace, 0).unwrap() / t;
        assert!((cce - expected).abs() < 1e-12);

        let ce = ce_epsilon(&trace).unwrap();
        let expected = contextual_swap_regret(&trace, 0).unwrap() / t;
        assert!((ce - expected).abs() < 1e-12);

        assert!(ce >= cce - 1e-9);
    }

    #[test]
    fn two_round_two_context_fixture_gap_is_half() {
        let e1 = Strategy::pure(2, 0);
        let trace = cost_trace(
            2,
            &[(0, vec![1.0, 0.0], e1.clone()), (1, vec![0.0, 1.0], e1)],
            None,
        );
        let cce = cce_epsilon(&trace).unwrap();
        assert!((cce - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_costs_give_zero_gaps() {
        let u = Strategy::uniform(2);
        let rounds: Vec<_> = (0..3).map(|_| (0usize, vec![0.0, 0.0], u.clone())).collect();
        let trace = cost_trace(1, &rounds, None);
        assert_eq!(cce_epsilon(&trace).unwrap(), 0.0);
        assert_eq!(ce_epsilon(&trace).unwrap(), 0.0);
    }
}
