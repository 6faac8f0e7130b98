//! Smoothness verification and social-welfare quantities for tabular games.

use crate::error::{Error, Result};
use crate::game::{Game, TabularGame};
use crate::trace::Trace;
use crate::types::{dot, ContextSpace};

/// Combinations of joint-action pairs and contexts above this count are
/// refused by the brute-force smoothness check.
const SMOOTHNESS_GUARD: u128 = 50_000_000;

/// The maximally violating triple of a failed smoothness check.
#[derive(Debug, Clone)]
pub struct SmoothnessWitness {
    pub joint: Vec<usize>,
    pub joint_star: Vec<usize>,
    pub context: usize,
    /// Left-hand side minus right-hand side at the triple (positive).
    pub violation: f64,
}

fn decode(mut index: usize, actions: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % actions;
        index /= actions;
    }
}

/// Brute-force check of per-context smoothness: for all joint actions `a`,
/// `a*` and contexts `z`,
/// `sum_j <z, phi_j(a*_j, a_-j)> <= delta sum_j <z, phi_j(a*)> + mu sum_j <z, phi_j(a)>`.
///
/// Returns `Ok(None)` when the game is `(delta, mu)`-smooth, otherwise the
/// maximally violating triple.
pub fn check_smoothness(
    game: &TabularGame,
    contexts: &ContextSpace,
    delta: f64,
    mu: f64,
) -> Result<Option<SmoothnessWitness>> {
    if delta < 0.0 || mu < 0.0 {
        return Err(Error::invalid("smoothness parameters must be nonnegative"));
    }
    let j = game.num_agents();
    let k = game.num_actions();
    let joint_count = (k as u128).pow(j as u32);
    if joint_count * joint_count * contexts.len() as u128 > SMOOTHNESS_GUARD {
        return Err(Error::SizeGuard(format!(
            "smoothness check needs (K^J)^2 m = {} evaluations",
            joint_count * joint_count * contexts.len() as u128
        )));
    }
    let joint_count = joint_count as usize;

    // total[z][a] = sum_j <z, phi_j(a)>
    let mut totals = vec![vec![0.0f64; joint_count]; contexts.len()];
    let mut joint = vec![0usize; j];
    for a in 0..joint_count {
        decode(a, k, &mut joint);
        for (z, zv) in contexts.vectors().iter().enumerate() {
            let mut sum = 0.0;
            for agent in 0..j {
                sum += dot(&game.payoff(agent, &joint)?, zv);
            }
            totals[z][a] = sum;
        }
    }

    let mut worst: Option<SmoothnessWitness> = None;
    let mut joint_star = vec![0usize; j];
    let mut deviated = vec![0usize; j];
    for a in 0..joint_count {
        decode(a, k, &mut joint);
        for a_star in 0..joint_count {
            decode(a_star, k, &mut joint_star);
            for (z, zv) in contexts.vectors().iter().enumerate() {
                // lhs = sum_j <z, phi_j(a*_j, a_{-j})>
                let mut lhs = 0.0;
                for agent in 0..j {
                    deviated.copy_from_slice(&joint);
                    deviated[agent] = joint_star[agent];
                    lhs += dot(&game.payoff(agent, &deviated)?, zv);
                }
                let rhs = delta * totals[z][a_star] + mu * totals[z][a];
                let violation = lhs - rhs;
                if violation > 1e-12 {
                    let replace = match &worst {
                        Some(w) => violation > w.violation,
                        None => true,
                    };
                    if replace {
                        worst = Some(SmoothnessWitness {
                            joint: joint.clone(),
                            joint_star: joint_star.clone(),
                            context: z,
                            violation,
                        });
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Optimal average social cost in pure strategy: for each context the best
/// joint pure action for the sum of costs, averaged by the trace's context
/// frequencies.
pub fn optimal_social_cost(game: &TabularGame, trace: &Trace) -> Result<f64> {
    let j = game.num_agents();
    let k = game.num_actions();
    let joint_count = (k as u128).pow(j as u32);
    if joint_count > 1_000_000 {
        return Err(Error::SizeGuard(format!(
            "optimal social cost needs K^J = {joint_count} evaluations"
        )));
    }
    let joint_count = joint_count as usize;
    let occurrences = trace.context_occurrences();
    let mut joint = vec![0usize; j];
    let mut total = 0.0;
    for (z, rounds) in occurrences.iter().enumerate() {
        if rounds.is_empty() {
            continue;
        }
        let zv = trace.contexts.vector(z)?;
        let mut best = f64::INFINITY;
        for a in 0..joint_count {
            decode(a, k, &mut joint);
            let mut sum = 0.0;
            for agent in 0..j {
                sum += dot(&game.payoff(agent, &joint)?, zv);
            }
            best = best.min(sum);
        }
        total += rounds.len() as f64 * best;
    }
    Ok(total / trace.rounds() as f64)
}

/// `(1/T) sum_t C_t(w_t)`: the realized average social cost of a trace.
pub fn social_cost_average(trace: &Trace) -> f64 {
    let total: f64 = trace.records.iter().map(|r| r.costs.iter().sum::<f64>()).sum();
    total / trace.rounds() as f64
}
