//! Loopless k-shortest paths by Yen's algorithm over non-negative edge
//! costs. Output is in nondecreasing cost order with lexicographic
//! node-sequence tie-breaking, which keeps action sets deterministic.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::Result;
use crate::games::graph::{Graph, Path};

/// Dijkstra from `source` to `target`, restricted to nodes outside
/// `banned_nodes` and edges outside `banned_edges`. Ties between equal-cost
/// relaxations resolve toward the lexicographically smaller predecessor
/// path, so the returned path is itself deterministic.
fn shortest_path(
    graph: &Graph,
    source: usize,
    target: usize,
    banned_nodes: &[bool],
    banned_edges: &HashSet<usize>,
) -> Option<Path> {
    #[derive(PartialEq)]
    struct Item {
        cost: f64,
        node: usize,
    }
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            // Reverse for a min-heap on cost, then node index.
            other
                .cost
                .total_cmp(&self.cost)
                .then_with(|| other.node.cmp(&self.node))
        }
    }

    let n = graph.num_nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev_edge: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Item { cost: 0.0, node: source });
    while let Some(Item { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == target {
            break;
        }
        for &ei in graph.outgoing(node) {
            if banned_edges.contains(&ei) {
                continue;
            }
            let edge = graph.edge(ei);
            if banned_nodes[edge.to] {
                continue;
            }
            let next = cost + edge.cost;
            if next < dist[edge.to] {
                dist[edge.to] = next;
                prev_edge[edge.to] = Some(ei);
                heap.push(Item { cost: next, node: edge.to });
            }
        }
    }
    if !dist[target].is_finite() {
        return None;
    }
    let mut nodes = vec![target];
    let mut cursor = target;
    while cursor != source {
        let ei = prev_edge[cursor]?;
        cursor = graph.edge(ei).from;
        nodes.push(cursor);
    }
    nodes.reverse();
    Path::from_nodes(graph, nodes).ok()
}

/// Up to `k` loopless paths from `source` to `target`, cheapest first. An
/// unreachable target yields an empty list; fewer than `k` paths are
/// returned when fewer exist.
pub fn yen_k_shortest(graph: &Graph, source: usize, target: usize, k: usize) -> Result<Vec<Path>> {
    if source == target {
        return Err(crate::error::Error::invalid(
            "k-shortest paths need distinct source and target",
        ));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut confirmed: Vec<Path> = Vec::new();
    let no_nodes = vec![false; graph.num_nodes()];
    let no_edges = HashSet::new();
    match shortest_path(graph, source, target, &no_nodes, &no_edges) {
        Some(p) => confirmed.push(p),
        None => return Ok(Vec::new()),
    }

    // Candidate pool, deduplicated by node sequence.
    let mut candidates: Vec<Path> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(confirmed[0].nodes.clone());

    while confirmed.len() < k {
        let last = confirmed.last().unwrap().clone();
        // Spur from every prefix of the last confirmed path.
        for spur_idx in 0..last.nodes.len() - 1 {
            let spur_node = last.nodes[spur_idx];
            let root_nodes = &last.nodes[..=spur_idx];

            let mut banned_edges = HashSet::new();
            for p in &confirmed {
                if p.nodes.len() > spur_idx && p.nodes[..=spur_idx] == *root_nodes {
                    if let Some(&ei) = p.edges.get(spur_idx) {
                        banned_edges.insert(ei);
                    }
                }
            }
            let mut banned_nodes = vec![false; graph.num_nodes()];
            for &node in &root_nodes[..spur_idx] {
                banned_nodes[node] = true;
            }

            if let Some(spur) = shortest_path(graph, spur_node, target, &banned_nodes, &banned_edges)
            {
                let mut nodes = root_nodes.to_vec();
                nodes.extend_from_slice(&spur.nodes[1..]);
                if seen.insert(nodes.clone()) {
                    candidates.push(Path::from_nodes(graph, nodes)?);
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        // Extract the best candidate: lowest cost, then lexicographic nodes.
        let best = candidates
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.cost.total_cmp(&b.cost).then_with(|| a.nodes.cmp(&b.nodes))
            })
            .map(|(i, _)| i)
            .unwrap();
        confirmed.push(candidates.swap_remove(best));
    }

    confirmed.sort_by(|a, b| a.cost.total_cmp(&b.cost).then_with(|| a.nodes.cmp(&b.nodes)));
    Ok(confirmed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::graph::Edge;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
        Graph::new(
            n,
            edges.iter().map(|&(from, to, cost)| Edge { from, to, cost }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn line_graph_has_a_single_path() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let paths = yen_k_shortest(&g, 0, 2, 2).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].nodes, vec![0, 1, 2]);
    }

    #[test]
    fn triangle_orders_by_cost() {
        let g = graph(3, &[(0, 2, 1.0), (0, 1, 1.0), (1, 2, 1.0)]);
        let paths = yen_k_shortest(&g, 0, 2, 2).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].nodes, vec![0, 2]);
        assert!((paths[0].cost - 1.0).abs() < 1e-15);
        assert_eq!(paths[1].nodes, vec![0, 1, 2]);
        assert!((paths[1].cost - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unreachable_target_yields_no_paths() {
        let g = graph(3, &[(0, 1, 1.0)]);
        assert!(yen_k_shortest(&g, 0, 2, 3).unwrap().is_empty());
    }

    #[test]
    fn rejects_equal_endpoints() {
        let g = graph(2, &[(0, 1, 1.0)]);
        assert!(yen_k_shortest(&g, 1, 1, 1).is_err());
    }

    #[test]
    fn output_is_loopless_sorted_and_unique() {
        // Diamond with parallel-ish routes.
        let g = graph(
            6,
            &[
                (0, 1, 1.0),
                (0, 2, 1.5),
                (1, 3, 1.0),
                (2, 3, 1.0),
                (1, 2, 0.2),
                (3, 4, 1.0),
                (2, 4, 3.0),
                (4, 5, 0.5),
                (3, 5, 2.0),
            ],
        );
        let paths = yen_k_shortest(&g, 0, 5, 10).unwrap();
        for pair in paths.windows(2) {
            assert!(pair[0].cost <= pair[1].cost + 1e-12);
            assert_ne!(pair[0].nodes, pair[1].nodes);
        }
        for p in &paths {
            let mut sorted = p.nodes.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), p.nodes.len(), "loop in {:?}", p.nodes);
        }
    }
}
