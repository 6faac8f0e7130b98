//! The abstract game capability and the dense tabular implementation.
//!
//! A game exposes the payoff map `phi^j(a) in R^d` for joint pure actions and
//! the expected cost matrix `Phi^j(w^{-j})` whose column `k` averages
//! `phi^j(a^j_k, a^{-j})` over the opponents' product distribution. Together
//! with a context vector this determines every cost in the run:
//! `c^j(w, z) = <z, Phi^j(w^{-j}) w^j>`.

use crate::error::{Error, Result};
use crate::types::{dot, ContextSpace, CostMatrix, JointProfile, Strategy};

/// Joint pure action spaces above this size must use a structured game
/// implementation instead of dense tabular storage.
pub const TABULAR_GUARD: u128 = 10_000_000;

/// A `J`-agent, `K`-action game with payoff dimension `d`.
///
/// Implementations must be deterministic: the same inputs yield bitwise
/// identical cost matrices.
pub trait Game: Send + Sync {
    /// Agent count `J`.
    fn num_agents(&self) -> usize;
    /// Common action count `K`.
    fn num_actions(&self) -> usize;
    /// Payoff dimension `d`.
    fn payoff_dim(&self) -> usize;

    /// The payoff vector `phi^j(a)` for a joint pure action.
    fn payoff(&self, agent: usize, joint: &[usize]) -> Result<Vec<f64>>;

    /// The expected cost matrix of `agent` against the `J - 1` opponent
    /// strategies, ordered by skipping the agent's own slot.
    fn cost_matrix(&self, agent: usize, opponents: &[Strategy]) -> Result<CostMatrix>;

    /// Cost matrices of every agent against one profile snapshot.
    ///
    /// The default delegates to [`Game::cost_matrix`]; structured games may
    /// share per-profile precomputation across agents.
    fn profile_cost_matrices(&self, profile: &JointProfile) -> Result<Vec<CostMatrix>> {
        (0..self.num_agents())
            .map(|j| self.cost_matrix(j, &profile.opponents_of(j)))
            .collect()
    }
}

fn check_profile<G: Game + ?Sized>(game: &G, agent: usize, opponents: &[Strategy]) -> Result<()> {
    if agent >= game.num_agents() {
        return Err(Error::invalid(format!(
            "agent index {agent} out of range (J = {})",
            game.num_agents()
        )));
    }
    if opponents.len() != game.num_agents() - 1 {
        return Err(Error::AgentDimensionMismatch {
            agent,
            what: "opponent count".into(),
            expected: game.num_agents() - 1,
            actual: opponents.len(),
        });
    }
    for (slot, s) in opponents.iter().enumerate() {
        if s.len() != game.num_actions() {
            // Map the opponent slot back to its agent index.
            let opp = if slot < agent { slot } else { slot + 1 };
            return Err(Error::AgentDimensionMismatch {
                agent: opp,
                what: "opponent strategy length".into(),
                expected: game.num_actions(),
                actual: s.len(),
            });
        }
    }
    Ok(())
}

/// A game with every payoff vector `phi^j(a)` stored explicitly.
///
/// The tensor has shape `J x K^J x d` with the joint action index in
/// mixed-radix order (agent 0 most significant).
#[derive(Debug, Clone)]
pub struct TabularGame {
    agents: usize,
    actions: usize,
    dim: usize,
    /// `payoffs[j][joint_index * dim + l]`
    payoffs: Vec<Vec<f64>>,
    normalization: f64,
}

impl TabularGame {
    /// Builds a tabular game from a payoff function over joint pure actions.
    pub fn from_fn(
        agents: usize,
        actions: usize,
        dim: usize,
        mut phi: impl FnMut(usize, &[usize]) -> Vec<f64>,
    ) -> Result<Self> {
        if agents == 0 || actions == 0 || dim == 0 {
            return Err(Error::invalid("J, K and d must all be positive"));
        }
        let joint_count = (actions as u128).checked_pow(agents as u32).unwrap_or(u128::MAX);
        if joint_count > TABULAR_GUARD {
            return Err(Error::SizeGuard(format!(
                "K^J = {actions}^{agents} joint actions exceed the tabular limit {TABULAR_GUARD}; \
                 use a structured game"
            )));
        }
        let joint_count = joint_count as usize;
        let mut payoffs = vec![vec![0.0; joint_count * dim]; agents];
        let mut joint = vec![0usize; agents];
        for index in 0..joint_count {
            decode_joint(index, actions, &mut joint);
            for (j, table) in payoffs.iter_mut().enumerate() {
                let v = phi(j, &joint);
                if v.len() != dim {
                    return Err(Error::AgentDimensionMismatch {
                        agent: j,
                        what: "payoff vector length".into(),
                        expected: dim,
                        actual: v.len(),
                    });
                }
                table[index * dim..(index + 1) * dim].copy_from_slice(&v);
            }
        }
        Ok(Self { agents, actions, dim, payoffs, normalization: 1.0 })
    }

    /// Mixed-radix index of a joint action (agent 0 most significant).
    pub fn joint_index(&self, joint: &[usize]) -> usize {
        joint.iter().fold(0, |acc, a| acc * self.actions + a)
    }

    /// Number of joint pure actions `K^J`.
    pub fn joint_count(&self) -> usize {
        self.actions.pow(self.agents as u32)
    }

    /// The normalization factor applied at construction (1 when unchanged).
    pub fn normalization_factor(&self) -> f64 {
        self.normalization
    }

    fn payoff_slice(&self, agent: usize, joint_index: usize) -> &[f64] {
        &self.payoffs[agent][joint_index * self.dim..(joint_index + 1) * self.dim]
    }
}

fn decode_joint(mut index: usize, actions: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % actions;
        index /= actions;
    }
}

impl Game for TabularGame {
    fn num_agents(&self) -> usize {
        self.agents
    }

    fn num_actions(&self) -> usize {
        self.actions
    }

    fn payoff_dim(&self) -> usize {
        self.dim
    }

    fn payoff(&self, agent: usize, joint: &[usize]) -> Result<Vec<f64>> {
        if agent >= self.agents {
            return Err(Error::invalid(format!("agent index {agent} out of range")));
        }
        if joint.len() != self.agents || joint.iter().any(|a| *a >= self.actions) {
            return Err(Error::invalid("joint action out of range"));
        }
        Ok(self.payoff_slice(agent, self.joint_index(joint)).to_vec())
    }

    /// Explicit summation over the `K^(J-1)` opponent joint actions weighted
    /// by product probabilities.
    fn cost_matrix(&self, agent: usize, opponents: &[Strategy]) -> Result<CostMatrix> {
        check_profile(self, agent, opponents)?;
        let mut phi = CostMatrix::zeros(self.dim, self.actions);
        let mut opp_joint = vec![0usize; opponents.len()];
        let opp_count = self.actions.pow(opponents.len() as u32);
        let mut joint = vec![0usize; self.agents];
        for opp_index in 0..opp_count {
            decode_joint(opp_index, self.actions, &mut opp_joint);
            let mut prob = 1.0;
            for (slot, a) in opp_joint.iter().enumerate() {
                prob *= opponents[slot][*a];
            }
            if prob == 0.0 {
                continue;
            }
            // Assemble the full joint action with the agent's own slot free.
            for (slot, a) in opp_joint.iter().enumerate() {
                let idx = if slot < agent { slot } else { slot + 1 };
                joint[idx] = *a;
            }
            for k in 0..self.actions {
                joint[agent] = k;
                let payoff = self.payoff_slice(agent, self.joint_index(&joint));
                for (l, p) in payoff.iter().enumerate() {
                    *phi.entry_mut(l, k) += prob * p;
                }
            }
        }
        Ok(phi)
    }
}

/// Enforces the boundedness normalization `|<z, phi^j(a)>| <= 1`.
///
/// Computes `M = max_{j,a,z} |<z, phi^j(a)>|`; if `M > 1` every payoff vector
/// is rescaled by `1/M` and that factor is returned, otherwise the game is
/// returned unchanged with factor 1. All-zero games are legal (`M = 0`).
pub fn validate_and_normalize(
    mut game: TabularGame,
    contexts: &ContextSpace,
) -> Result<(TabularGame, f64)> {
    if contexts.dim() != game.dim {
        return Err(Error::DimensionMismatch {
            what: "context dimension for normalization".into(),
            expected: game.dim,
            actual: contexts.dim(),
        });
    }
    for (j, table) in game.payoffs.iter().enumerate() {
        if table.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("payoff tensor of agent {j}")));
        }
    }
    let mut max_abs: f64 = 0.0;
    for table in &game.payoffs {
        for joint in table.chunks_exact(game.dim) {
            for z in contexts.vectors() {
                max_abs = max_abs.max(dot(joint, z).abs());
            }
        }
    }
    if max_abs > 1.0 {
        let factor = 1.0 / max_abs;
        for table in &mut game.payoffs {
            for x in table.iter_mut() {
                *x *= factor;
            }
        }
        game.normalization = factor;
        Ok((game, factor))
    } else {
        Ok((game, 1.0))
    }
}
