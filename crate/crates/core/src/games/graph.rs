//! Directed graphs with positive per-edge base cost coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Base cost coefficient (free-flow travel time for road networks).
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<Edge>,
    /// `adjacency[node]` lists edge indices leaving `node`.
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(num_nodes: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); num_nodes];
        for (i, e) in edges.iter().enumerate() {
            if e.from >= num_nodes || e.to >= num_nodes {
                return Err(Error::invalid(format!(
                    "edge {i} endpoints ({}, {}) out of range for {num_nodes} nodes",
                    e.from, e.to
                )));
            }
            if e.from == e.to {
                return Err(Error::invalid(format!("edge {i} is a self-loop at node {}", e.from)));
            }
            if !(e.cost.is_finite() && e.cost > 0.0) {
                return Err(Error::invalid(format!("edge {i} has non-positive cost {}", e.cost)));
            }
            adjacency[e.from].push(i);
        }
        Ok(Self { num_nodes, edges, adjacency })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// Edge indices leaving `node`.
    pub fn outgoing(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    /// The index of the edge `from -> to`, if present.
    pub fn edge_index(&self, from: usize, to: usize) -> Option<usize> {
        self.adjacency.get(from)?.iter().copied().find(|&i| self.edges[i].to == to)
    }
}

/// A path as a node sequence, with its edge indices and total base cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
    pub cost: f64,
}

impl Path {
    /// Builds a path from a node sequence, validating every hop exists.
    pub fn from_nodes(graph: &Graph, nodes: Vec<usize>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("a path needs at least two nodes"));
        }
        let mut edges = Vec::with_capacity(nodes.len() - 1);
        let mut cost = 0.0;
        for pair in nodes.windows(2) {
            let idx = graph.edge_index(pair[0], pair[1]).ok_or_else(|| {
                Error::invalid(format!("no edge {} -> {} in the graph", pair[0], pair[1]))
            })?;
            edges.push(idx);
            cost += graph.edge(idx).cost;
        }
        Ok(Self { nodes, edges, cost })
    }
}
