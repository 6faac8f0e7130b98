//! Shared helpers and independent oracles for the integration tests. The
//! oracles deliberately recompute quantities along different routes than
//! the library code they check.
#![allow(dead_code)] // each test binary uses its own subset

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use predplay_core::game::Game;
use predplay_core::types::{dot, ContextSpace, CostMatrix, Strategy};

/// Brute-force expected cost matrix: recursive enumeration over all
/// opponent joint actions, weighting payoffs by product probabilities.
pub fn brute_force_cost_matrix(
    game: &dyn Game,
    agent: usize,
    opponents: &[Strategy],
) -> CostMatrix {
    let k = game.num_actions();
    let d = game.payoff_dim();
    let j = game.num_agents();
    let mut columns = vec![vec![0.0f64; d]; k];

    fn recurse(
        game: &dyn Game,
        agent: usize,
        opponents: &[Strategy],
        joint: &mut Vec<usize>,
        slot: usize,
        prob: f64,
        columns: &mut [Vec<f64>],
    ) {
        let j = game.num_agents();
        if slot == j {
            let k = game.num_actions();
            for own in 0..k {
                joint[agent] = own;
                let phi = game.payoff(agent, joint).unwrap();
                for (acc, p) in columns[own].iter_mut().zip(&phi) {
                    *acc += prob * p;
                }
            }
            return;
        }
        if slot == agent {
            recurse(game, agent, opponents, joint, slot + 1, prob, columns);
            return;
        }
        let opp_index = if slot < agent { slot } else { slot - 1 };
        for a in 0..game.num_actions() {
            joint[slot] = a;
            let w = opponents[opp_index][a];
            if w > 0.0 {
                recurse(game, agent, opponents, joint, slot + 1, prob * w, columns);
            }
        }
    }

    let mut joint = vec![0usize; j];
    recurse(game, agent, opponents, &mut joint, 0, 1.0, &mut columns);
    CostMatrix::from_columns(columns).unwrap()
}

/// Direct expectation of the cost: `sum_a prod_j w_j[a_j] <z, phi_agent(a)>`
/// over every joint action including the agent's own strategy.
pub fn brute_force_expected_cost(
    game: &dyn Game,
    agent: usize,
    strategies: &[Strategy],
    z: &[f64],
) -> f64 {
    let j = game.num_agents();
    let k = game.num_actions();
    let mut total = 0.0;
    let joint_count = k.pow(j as u32);
    let mut joint = vec![0usize; j];
    for index in 0..joint_count {
        let mut rest = index;
        for slot in joint.iter_mut().rev() {
            *slot = rest % k;
            rest /= k;
        }
        let mut prob = 1.0;
        for (slot, a) in joint.iter().enumerate() {
            prob *= strategies[slot][*a];
        }
        if prob == 0.0 {
            continue;
        }
        total += prob * dot(&game.payoff(agent, &joint).unwrap(), z);
    }
    total
}

/// A random strategy from unnormalized uniform weights.
pub fn random_strategy(k: usize, rng: &mut ChaCha12Rng) -> Strategy {
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    Strategy::new(weights).unwrap()
}

/// A random context space with coordinates in `[-1, 1]`.
pub fn random_contexts(m: usize, d: usize, rng: &mut ChaCha12Rng) -> ContextSpace {
    loop {
        let vectors: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        if let Ok(space) = ContextSpace::new(vectors) {
            return space;
        }
    }
}

/// A random cost matrix whose realizable costs stay in `[-1, 1]` for any
/// context with coordinates in `[-1, 1]` (entries bounded by `1/d`).
pub fn random_bounded_cost_matrix(d: usize, k: usize, rng: &mut ChaCha12Rng) -> CostMatrix {
    let bound = 1.0 / d as f64;
    let columns = (0..k)
        .map(|_| (0..d).map(|_| rng.random_range(-bound..bound)).collect())
        .collect();
    CostMatrix::from_columns(columns).unwrap()
}
