//! Seeded random tabular games for property tests and bound audits.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::Result;
use crate::game::{validate_and_normalize, TabularGame};
use crate::types::ContextSpace;

/// A random `J`-agent, `K`-action game with payoff dimension `d` and `m`
/// random context vectors, normalized so every realizable cost lies in
/// `[-1, 1]`. Payoff entries and context coordinates are uniform on
/// `[-1, 1]`; the same seed gives a bitwise identical game.
pub fn random_tabular_game(
    agents: usize,
    actions: usize,
    dim: usize,
    num_contexts: usize,
    rng: &mut ChaCha12Rng,
) -> Result<(TabularGame, ContextSpace)> {
    let joint_count = actions.pow(agents as u32);
    let mut payoffs = vec![vec![0.0f64; joint_count * dim]; agents];
    for table in payoffs.iter_mut() {
        for x in table.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
    }
    let vectors = (0..num_contexts)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let contexts = ContextSpace::new(vectors)?;
    let game = TabularGame::from_fn(agents, actions, dim, |j, joint| {
        let index: usize = joint.iter().fold(0, |acc, a| acc * actions + a);
        payoffs[j][index * dim..(index + 1) * dim].to_vec()
    })?;
    let (game, _) = validate_and_normalize(game, &contexts)?;
    Ok((game, contexts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Game;
    use crate::types::dot;
    use rand::SeedableRng;

    #[test]
    fn same_seed_same_game() {
        let build = || {
            let mut rng = ChaCha12Rng::seed_from_u64(7);
            random_tabular_game(2, 3, 2, 2, &mut rng).unwrap()
        };
        let (g1, c1) = build();
        let (g2, c2) = build();
        assert_eq!(c1, c2);
        for joint in [[0, 0], [1, 2], [2, 1]] {
            for agent in 0..2 {
                assert_eq!(g1.payoff(agent, &joint).unwrap(), g2.payoff(agent, &joint).unwrap());
            }
        }
    }

    #[test]
    fn output_satisfies_the_unit_bound() {
        for seed in 0..20 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let (game, contexts) = random_tabular_game(3, 2, 3, 2, &mut rng).unwrap();
            let mut joint = vec![0usize; 3];
            for index in 0..game.joint_count() {
                let mut rest = index;
                for slot in joint.iter_mut().rev() {
                    *slot = rest % 2;
                    rest /= 2;
                }
                for agent in 0..3 {
                    let phi = game.payoff(agent, &joint).unwrap();
                    for z in contexts.vectors() {
                        assert!(dot(&phi, z).abs() <= 1.0 + 1e-9);
                    }
                }
            }
        }
    }
}
