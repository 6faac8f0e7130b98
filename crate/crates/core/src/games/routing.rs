//! The contextual congestion routing game: each agent routes a quantity
//! over one of its k shortest paths, congestion is linearized per edge, and
//! the states of nature are per-edge cost-coefficient vectors.

use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::games::graph::{Graph, Path};
use crate::games::yen::yen_k_shortest;
use crate::types::{ContextSpace, CostMatrix, JointProfile, Strategy};

/// One routing agent: an origin-destination pair, its quantity and its
/// action set of `K` paths.
#[derive(Debug, Clone)]
pub struct RoutingAgent {
    pub origin: usize,
    pub destination: usize,
    pub quantity: f64,
    pub paths: Vec<Path>,
}

/// Construction parameters for the routing game builder.
#[derive(Debug, Clone)]
pub struct RoutingConfig {
    /// Number of states of nature.
    pub num_contexts: usize,
    /// Paths per agent (`K`).
    pub paths_per_agent: usize,
    /// Mean of the exponential noise added per edge to the base
    /// coefficients when generating each context.
    pub noise_scale: f64,
    /// Agents whose `K`-th path exceeds their shortest path by more than
    /// this base-cost amount are excluded. `f64::INFINITY` keeps everyone.
    pub filter_threshold: f64,
}

impl Default for RoutingConfig {
    fn default() -> Self {
        Self { num_contexts: 5, paths_per_agent: 5, noise_scale: 1e-2, filter_threshold: 2.0 }
    }
}

/// Counts reported by the builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoutingBuildStats {
    pub total_pairs: usize,
    /// Pairs dropped because no path (or fewer than `K` paths) exists.
    pub unreachable: usize,
    /// Pairs excluded by the path-spread filter.
    pub filtered: usize,
    pub kept: usize,
}

#[derive(Debug, Clone)]
pub struct RoutingGame {
    graph: Graph,
    agents: Vec<RoutingAgent>,
    actions: usize,
    /// `q_j^4` per agent.
    load_weights: Vec<f64>,
    /// `edge_masks[j][k][e]`: does edge `e` lie on path `k` of agent `j`?
    edge_masks: Vec<Vec<Vec<bool>>>,
    /// Factor applied to all payoffs to satisfy the unit cost bound.
    payoff_scale: f64,
}

impl RoutingGame {
    /// Assembles a routing game over explicit agents and context vectors
    /// (one coefficient per edge and context), then normalizes payoffs so
    /// every realizable cost lies in `[-1, 1]`.
    pub fn new(graph: Graph, agents: Vec<RoutingAgent>, contexts: &ContextSpace) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::invalid("routing game needs at least one agent"));
        }
        if contexts.dim() != graph.num_edges() {
            return Err(Error::DimensionMismatch {
                what: "routing context vectors".into(),
                expected: graph.num_edges(),
                actual: contexts.dim(),
            });
        }
        let actions = agents[0].paths.len();
        if actions == 0 {
            return Err(Error::invalid("agents need at least one path"));
        }
        for (j, agent) in agents.iter().enumerate() {
            if agent.paths.len() != actions {
                return Err(Error::AgentDimensionMismatch {
                    agent: j,
                    what: "path count".into(),
                    expected: actions,
                    actual: agent.paths.len(),
                });
            }
            if !(agent.quantity.is_finite() && agent.quantity > 0.0) {
                return Err(Error::invalid(format!(
                    "agent {j} has non-positive quantity {}",
                    agent.quantity
                )));
            }
            for path in &agent.paths {
                let valid = path.nodes.first() == Some(&agent.origin)
                    && path.nodes.last() == Some(&agent.destination);
                if !valid {
                    return Err(Error::invalid(format!(
                        "agent {j} has a path not connecting {} to {}",
                        agent.origin, agent.destination
                    )));
                }
                // Edge existence is guaranteed by Path construction; check
                // indices against this graph anyway.
                if path.edges.iter().any(|&e| e >= graph.num_edges()) {
                    return Err(Error::invalid(format!("agent {j} has a path with unknown edges")));
                }
            }
        }

        let load_weights: Vec<f64> = agents.iter().map(|a| a.quantity.powi(4)).collect();
        let edge_masks: Vec<Vec<Vec<bool>>> = agents
            .iter()
            .map(|a| {
                a.paths
                    .iter()
                    .map(|p| {
                        let mut mask = vec![false; graph.num_edges()];
                        for &e in &p.edges {
                            mask[e] = true;
                        }
                        mask
                    })
                    .collect()
            })
            .collect();

        let mut game = Self { graph, agents, actions, load_weights, edge_masks, payoff_scale: 1.0 };
        let bound = game.max_bilinear_bound(contexts);
        if bound > 1.0 {
            game.payoff_scale = 1.0 / bound;
        }
        Ok(game)
    }

    /// Exact `max_{j,a,z} |<z, phi_j(a)>|`: every opponent independently
    /// maximizes its shared-edge coefficient mass with the agent's path, so
    /// the worst joint action decomposes per opponent.
    fn max_bilinear_bound(&self, contexts: &ContextSpace) -> f64 {
        let mut worst: f64 = 0.0;
        for z in contexts.vectors() {
            for (j, agent) in self.agents.iter().enumerate() {
                for path in &agent.paths {
                    let own: f64 =
                        path.edges.iter().map(|&e| z[e]).sum::<f64>() * self.load_weights[j];
                    let mut total = own;
                    for i in 0..self.agents.len() {
                        if i == j {
                            continue;
                        }
                        let mut best_shared: f64 = 0.0;
                        for mask in &self.edge_masks[i] {
                            let shared: f64 = path
                                .edges
                                .iter()
                                .filter(|&&e| mask[e])
                                .map(|&e| z[e])
                                .sum();
                            best_shared = best_shared.max(shared);
                        }
                        total += self.load_weights[i] * best_shared;
                    }
                    worst = worst.max(total.abs());
                }
            }
        }
        worst
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn agents(&self) -> &[RoutingAgent] {
        &self.agents
    }

    pub fn payoff_scale(&self) -> f64 {
        self.payoff_scale
    }

    /// Expected fraction of agent `i`'s mass on each edge under strategy
    /// `w`: `P_i[e] = sum_k w[k] 1{e in path_k}`.
    fn edge_probabilities(&self, agent: usize, w: &Strategy) -> Vec<f64> {
        let mut probs = vec![0.0; self.graph.num_edges()];
        for (k, wk) in w.iter().enumerate() {
            if *wk == 0.0 {
                continue;
            }
            for &e in &self.agents[agent].paths[k].edges {
                probs[e] += wk;
            }
        }
        probs
    }

    /// Fills agent `j`'s cost matrix given the expected opponent load per
    /// edge (own contribution excluded).
    fn fill_cost_matrix(&self, agent: usize, opponent_load: &[f64]) -> CostMatrix {
        let d = self.graph.num_edges();
        let mut phi = CostMatrix::zeros(d, self.actions);
        let own = self.load_weights[agent];
        for k in 0..self.actions {
            for &e in &self.agents[agent].paths[k].edges {
                *phi.entry_mut(e, k) = self.payoff_scale * (own + opponent_load[e]);
            }
        }
        phi
    }
}

impl Game for RoutingGame {
    fn num_agents(&self) -> usize {
        self.agents.len()
    }

    fn num_actions(&self) -> usize {
        self.actions
    }

    fn payoff_dim(&self) -> usize {
        self.graph.num_edges()
    }

    /// `phi^j_e(a) = 1{e in a^j} sum_i 1{e in a^i} q_i^4`, scaled by the
    /// normalization factor.
    fn payoff(&self, agent: usize, joint: &[usize]) -> Result<Vec<f64>> {
        if agent >= self.agents.len() {
            return Err(Error::invalid(format!("agent index {agent} out of range")));
        }
        if joint.len() != self.agents.len() || joint.iter().any(|&a| a >= self.actions) {
            return Err(Error::invalid("joint action out of range"));
        }
        let mut loads = vec![0.0; self.graph.num_edges()];
        for (i, &action) in joint.iter().enumerate() {
            let weight = self.load_weights[i];
            for &e in &self.agents[i].paths[action].edges {
                loads[e] += weight;
            }
        }
        let mut phi = vec![0.0; self.graph.num_edges()];
        for &e in &self.agents[agent].paths[joint[agent]].edges {
            phi[e] = self.payoff_scale * loads[e];
        }
        Ok(phi)
    }

    /// Exact expectation through per-edge opponent loads, in
    /// `O(J K path-length)` instead of `K^(J-1)` enumeration.
    fn cost_matrix(&self, agent: usize, opponents: &[Strategy]) -> Result<CostMatrix> {
        if agent >= self.agents.len() {
            return Err(Error::invalid(format!("agent index {agent} out of range")));
        }
        if opponents.len() != self.agents.len() - 1 {
            return Err(Error::AgentDimensionMismatch {
                agent,
                what: "opponent count".into(),
                expected: self.agents.len() - 1,
                actual: opponents.len(),
            });
        }
        let mut load = vec![0.0; self.graph.num_edges()];
        for (slot, w) in opponents.iter().enumerate() {
            let i = if slot < agent { slot } else { slot + 1 };
            if w.len() != self.actions {
                return Err(Error::AgentDimensionMismatch {
                    agent: i,
                    what: "strategy length".into(),
                    expected: self.actions,
                    actual: w.len(),
                });
            }
            let probs = self.edge_probabilities(i, w);
            for (l, p) in load.iter_mut().zip(&probs) {
                *l += self.load_weights[i] * p;
            }
        }
        Ok(self.fill_cost_matrix(agent, &load))
    }

    /// Shares the expected-edge-load precomputation across agents: the sum
    /// over all agents is assembled once per profile, then each agent
    /// subtracts its own contribution.
    fn profile_cost_matrices(&self, profile: &JointProfile) -> Result<Vec<CostMatrix>> {
        if profile.num_agents() != self.agents.len() {
            return Err(Error::DimensionMismatch {
                what: "profile agent count".into(),
                expected: self.agents.len(),
                actual: profile.num_agents(),
            });
        }
        let per_agent: Vec<Vec<f64>> = (0..self.agents.len())
            .map(|i| self.edge_probabilities(i, profile.strategy(i)))
            .collect();
        let mut total = vec![0.0f64; self.graph.num_edges()];
        for (i, probs) in per_agent.iter().enumerate() {
            for (t, p) in total.iter_mut().zip(probs) {
                *t += self.load_weights[i] * p;
            }
        }
        Ok((0..self.agents.len())
            .map(|j| {
                let own_probs = &per_agent[j];
                let minus_own: Vec<f64> = total
                    .iter()
                    .zip(own_probs)
                    .map(|(t, p)| t - self.load_weights[j] * p)
                    .collect();
                self.fill_cost_matrix(j, &minus_own)
            })
            .collect())
    }
}

/// Builds the routing game over a parsed network: one agent per supplied
/// origin-destination pair, `K` shortest paths each, `m` context vectors of
/// base-plus-exponential-noise coefficients, and the path-spread filter.
/// Unreachable pairs (or pairs with fewer than `K` loopless paths) are
/// dropped and counted.
pub fn build_routing_game(
    graph: Graph,
    quantities: &[(usize, usize, f64)],
    config: &RoutingConfig,
    rng: &mut ChaCha12Rng,
) -> Result<(RoutingGame, ContextSpace, RoutingBuildStats)> {
    if config.num_contexts == 0 || config.paths_per_agent == 0 {
        return Err(Error::invalid("m and K must be positive"));
    }
    if !(config.noise_scale.is_finite() && config.noise_scale >= 0.0) {
        return Err(Error::invalid("noise scale must be nonnegative"));
    }

    // Context vectors are drawn before agent filtering so the context draw
    // does not depend on which agents survive.
    let vectors: Vec<Vec<f64>> = (0..config.num_contexts)
        .map(|_| {
            graph
                .edges()
                .iter()
                .map(|e| {
                    let noise: f64 = Exp1.sample(rng);
                    e.cost + config.noise_scale * noise
                })
                .collect()
        })
        .collect();
    let contexts = if config.noise_scale == 0.0 {
        ContextSpace::new_allow_duplicates(vectors)?
    } else {
        ContextSpace::new(vectors)?
    };

    let mut stats = RoutingBuildStats {
        total_pairs: quantities.len(),
        unreachable: 0,
        filtered: 0,
        kept: 0,
    };
    let mut agents = Vec::new();
    for &(origin, destination, quantity) in quantities {
        if origin >= graph.num_nodes() || destination >= graph.num_nodes() {
            return Err(Error::invalid(format!(
                "origin-destination pair ({origin}, {destination}) out of range"
            )));
        }
        let paths = yen_k_shortest(&graph, origin, destination, config.paths_per_agent)?;
        if paths.len() < config.paths_per_agent {
            stats.unreachable += 1;
            continue;
        }
        let spread = paths.last().unwrap().cost - paths[0].cost;
        if spread > config.filter_threshold {
            stats.filtered += 1;
            continue;
        }
        agents.push(RoutingAgent { origin, destination, quantity, paths });
    }
    stats.kept = agents.len();
    if agents.is_empty() {
        return Err(Error::invalid(
            "no agents survive the reachability and path-spread filters",
        ));
    }
    let game = RoutingGame::new(graph, agents, &contexts)?;
    Ok((game, contexts, stats))
}

/// All ordered node pairs with a common quantity, the default demand model
/// when no quantities file is supplied.
pub fn all_pairs_quantities(graph: &Graph, quantity: f64) -> Vec<(usize, usize, f64)> {
    let n = graph.num_nodes();
    let mut out = Vec::with_capacity(n * (n - 1));
    for origin in 0..n {
        for destination in 0..n {
            if origin != destination {
                out.push((origin, destination, quantity));
            }
        }
    }
    out
}
