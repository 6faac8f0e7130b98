//! Brute-force oracle checks: expected cost matrices against explicit
//! enumeration, and k-shortest paths against exhaustive path enumeration.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use common::{brute_force_cost_matrix, brute_force_expected_cost, random_strategy};
use predplay_core::game::{Game, TabularGame};
use predplay_core::games::graph::{Edge, Graph, Path};
use predplay_core::games::routing::{RoutingAgent, RoutingGame};
use predplay_core::games::yen_k_shortest;
use predplay_core::types::{expected_cost, ContextSpace, JointProfile, Strategy};

fn random_tabular(j: usize, k: usize, d: usize, rng: &mut ChaCha12Rng) -> TabularGame {
    let joint_count = k.pow(j as u32);
    let payoffs: Vec<Vec<f64>> = (0..j)
        .map(|_| (0..joint_count * d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    TabularGame::from_fn(j, k, d, |agent, joint| {
        let index: usize = joint.iter().fold(0, |acc, a| acc * k + a);
        payoffs[agent][index * d..(index + 1) * d].to_vec()
    })
    .unwrap()
}

#[test]
fn tabular_cost_matrix_matches_brute_force_enumeration() {
    let mut rng = ChaCha12Rng::seed_from_u64(100);
    for _ in 0..30 {
        let j = rng.random_range(2..=4);
        let k = rng.random_range(2..=3);
        let d = rng.random_range(1..=3);
        let game = random_tabular(j, k, d, &mut rng);
        let opponents: Vec<Strategy> = (0..j - 1).map(|_| random_strategy(k, &mut rng)).collect();
        for agent in 0..j {
            let fast = game.cost_matrix(agent, &opponents).unwrap();
            let slow = brute_force_cost_matrix(&game, agent, &opponents);
            for kk in 0..k {
                for l in 0..d {
                    assert!(
                        (fast.entry(l, kk) - slow.entry(l, kk)).abs() < 1e-12,
                        "J={j} K={k} d={d} agent={agent} entry ({l},{kk})"
                    );
                }
            }
        }
    }
}

#[test]
fn three_agent_cost_matrix_matches_sum_over_four_opponent_joints() {
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let game = random_tabular(3, 2, 2, &mut rng);
    let opponents = vec![random_strategy(2, &mut rng), random_strategy(2, &mut rng)];
    let fast = game.cost_matrix(0, &opponents).unwrap();
    // Explicit four-term sum over the opponents' joint actions.
    for own in 0..2 {
        for l in 0..2 {
            let mut expected = 0.0;
            for a1 in 0..2 {
                for a2 in 0..2 {
                    let prob = opponents[0][a1] * opponents[1][a2];
                    expected += prob * game.payoff(0, &[own, a1, a2]).unwrap()[l];
                }
            }
            assert!((fast.entry(l, own) - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn lemma_equivalence_cost_matrix_agrees_with_direct_expectation() {
    let mut rng = ChaCha12Rng::seed_from_u64(102);
    for _ in 0..30 {
        let j = rng.random_range(2..=3);
        let k = rng.random_range(2..=3);
        let d = rng.random_range(1..=3);
        let game = random_tabular(j, k, d, &mut rng);
        let strategies: Vec<Strategy> = (0..j).map(|_| random_strategy(k, &mut rng)).collect();
        let z: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        for agent in 0..j {
            let opponents: Vec<Strategy> = strategies
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != agent)
                .map(|(_, s)| s.clone())
                .collect();
            let phi = game.cost_matrix(agent, &opponents).unwrap();
            let via_matrix = expected_cost(&phi, &strategies[agent], &z).unwrap();
            let direct = brute_force_expected_cost(&game, agent, &strategies, &z);
            assert!((via_matrix - direct).abs() < 1e-12);
        }
    }
}

fn random_routing_instance(
    rng: &mut ChaCha12Rng,
) -> Option<(RoutingGame, ContextSpace, usize, usize)> {
    // 4-node graphs with enough structure for 2 paths per agent.
    let nodes = 4usize;
    let mut edges = Vec::new();
    for from in 0..nodes {
        for to in 0..nodes {
            if from != to && rng.random_range(0.0..1.0) < 0.75 {
                edges.push(Edge { from, to, cost: rng.random_range(0.5..2.0) });
            }
        }
    }
    let graph = Graph::new(nodes, edges).ok()?;
    let k = 2usize;
    let agents_wanted = 3usize;
    let mut agents = Vec::new();
    'outer: for origin in 0..nodes {
        for destination in 0..nodes {
            if origin == destination {
                continue;
            }
            let paths = yen_k_shortest(&graph, origin, destination, k).ok()?;
            if paths.len() == k {
                agents.push(RoutingAgent {
                    origin,
                    destination,
                    quantity: rng.random_range(0.5..1.5),
                    paths,
                });
                if agents.len() == agents_wanted {
                    break 'outer;
                }
            }
        }
    }
    if agents.len() < agents_wanted {
        return None;
    }
    let d = graph.num_edges();
    let vectors: Vec<Vec<f64>> = (0..2)
        .map(|_| (0..d).map(|_| rng.random_range(0.1..1.0)).collect())
        .collect();
    let contexts = ContextSpace::new(vectors).ok()?;
    let game = RoutingGame::new(graph, agents, &contexts).ok()?;
    Some((game, contexts, agents_wanted, k))
}

#[test]
fn routing_cost_matrix_matches_brute_force_over_opponent_joints() {
    let mut rng = ChaCha12Rng::seed_from_u64(103);
    let mut instances = 0;
    while instances < 10 {
        let Some((game, contexts, j, k)) = random_routing_instance(&mut rng) else {
            continue;
        };
        instances += 1;
        let strategies: Vec<Strategy> = (0..j).map(|_| random_strategy(k, &mut rng)).collect();
        let profile = JointProfile::new(strategies.clone()).unwrap();
        let shared = game.profile_cost_matrices(&profile).unwrap();
        for agent in 0..j {
            let opponents = profile.opponents_of(agent);
            let fast = game.cost_matrix(agent, &opponents).unwrap();
            let slow = brute_force_cost_matrix(&game, agent, &opponents);
            for kk in 0..k {
                for l in 0..game.payoff_dim() {
                    assert!((fast.entry(l, kk) - slow.entry(l, kk)).abs() < 1e-12);
                    assert!((shared[agent].entry(l, kk) - slow.entry(l, kk)).abs() < 1e-12);
                }
            }
            // And the full bilinear form agrees with the direct expectation.
            for z_idx in 0..contexts.len() {
                let z = contexts.vector(z_idx).unwrap();
                let via = expected_cost(&fast, &strategies[agent], z).unwrap();
                let direct = brute_force_expected_cost(&game, agent, &strategies, z);
                assert!((via - direct).abs() < 1e-12);
            }
        }
    }
}

/// Exhaustive loopless-path enumeration by depth-first search.
fn all_paths(graph: &Graph, source: usize, target: usize) -> Vec<Path> {
    fn dfs(
        graph: &Graph,
        node: usize,
        target: usize,
        visited: &mut Vec<bool>,
        stack: &mut Vec<usize>,
        out: &mut Vec<Path>,
    ) {
        if node == target {
            out.push(Path::from_nodes(graph, stack.clone()).unwrap());
            return;
        }
        for &ei in graph.outgoing(node) {
            let next = graph.edge(ei).to;
            if !visited[next] {
                visited[next] = true;
                stack.push(next);
                dfs(graph, next, target, visited, stack, out);
                stack.pop();
                visited[next] = false;
            }
        }
    }
    let mut visited = vec![false; graph.num_nodes()];
    visited[source] = true;
    let mut stack = vec![source];
    let mut out = Vec::new();
    dfs(graph, source, target, &mut visited, &mut stack, &mut out);
    out.sort_by(|a, b| a.cost.total_cmp(&b.cost).then_with(|| a.nodes.cmp(&b.nodes)));
    out
}

#[test]
fn yen_matches_exhaustive_enumeration_on_random_graphs() {
    let mut rng = ChaCha12Rng::seed_from_u64(104);
    for round in 0..40 {
        let nodes = rng.random_range(4..=8);
        let mut edges = Vec::new();
        for from in 0..nodes {
            for to in 0..nodes {
                if from != to && rng.random_range(0.0..1.0) < 0.4 {
                    edges.push(Edge { from, to, cost: rng.random_range(0.1..3.0) });
                }
            }
        }
        let Ok(graph) = Graph::new(nodes, edges) else { continue };
        let source = 0usize;
        let target = nodes - 1;
        let expected = all_paths(&graph, source, target);
        for k in [1usize, 3, 10] {
            let got = yen_k_shortest(&graph, source, target, k).unwrap();
            let want: Vec<&Path> = expected.iter().take(k).collect();
            assert_eq!(got.len(), want.len(), "round {round}, k = {k}");
            for (g, w) in got.iter().zip(&want) {
                assert!(
                    (g.cost - w.cost).abs() < 1e-12,
                    "round {round}, k = {k}: cost {} vs {}",
                    g.cost,
                    w.cost
                );
            }
            // The returned sets of node sequences must agree (equal-cost
            // orderings may differ only between equal costs, which the
            // lexicographic tie-break pins down).
            let got_nodes: Vec<&Vec<usize>> = got.iter().map(|p| &p.nodes).collect();
            let want_nodes: Vec<&Vec<usize>> = want.iter().map(|p| &p.nodes).collect();
            assert_eq!(got_nodes, want_nodes, "round {round}, k = {k}");
        }
    }
}
