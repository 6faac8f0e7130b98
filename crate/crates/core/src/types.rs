//! Shared domain types: context spaces, mixed strategies, joint profiles and
//! expected cost matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on simplex normalization. Exponential-weight updates
/// accumulate rounding, so strategies are renormalized on construction and
/// after every update.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// The finite set of states of nature `{z_1, ..., z_m}`, each a vector in
/// `R^d`. Context `i` keeps its index for the whole run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextSpace {
    vectors: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl ContextSpace {
    /// Builds a context space from `m >= 1` pairwise-distinct vectors of a
    /// common dimension.
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::invalid("context space must contain at least one vector"));
        }
        let d = vectors[0].len();
        if d == 0 {
            return Err(Error::invalid("context vectors must have dimension >= 1"));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    what: format!("context vector {i}"),
                    expected: d,
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("context vector {i}")));
            }
        }
        for i in 0..vectors.len() {
            for j in (i + 1)..vectors.len() {
                if vectors[i] == vectors[j] {
                    return Err(Error::invalid(format!(
                        "context vectors {i} and {j} are identical"
                    )));
                }
            }
        }
        Ok(Self { vectors, labels: None })
    }

    /// Like [`ContextSpace::new`] but tolerating duplicate vectors. Game
    /// builders use this for degenerate-but-legal setups (e.g. zero context
    /// noise makes all states of nature coincide); indices remain stable
    /// and distinct even when the vectors do not.
    pub fn new_allow_duplicates(vectors: Vec<Vec<f64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::invalid("context space must contain at least one vector"));
        }
        let d = vectors[0].len();
        if d == 0 {
            return Err(Error::invalid("context vectors must have dimension >= 1"));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    what: format!("context vector {i}"),
                    expected: d,
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("context vector {i}")));
            }
        }
        Ok(Self { vectors, labels: None })
    }

    /// Attaches one human-readable label per context.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch {
                what: "context labels".into(),
                expected: self.vectors.len(),
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Number of contexts `m`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false // m >= 1 by construction
    }

    /// Dimension `d` shared by all context vectors.
    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// The vector of context `index`.
    pub fn vector(&self, index: usize) -> Result<&[f64]> {
        self.vectors
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::ContextIndex { index, m: self.vectors.len() })
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(index)).map(String::as_str)
    }
}

/// A mixed strategy: a probability vector over `K` actions.
///
/// Every constructor renormalizes (divides by the sum), so any `Strategy`
/// value satisfies the simplex invariants within [`SIMPLEX_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Strategy {
    weights: Vec<f64>,
}

impl Strategy {
    /// Normalizes `weights` onto the simplex. Fails on negative entries,
    /// non-finite entries, or an all-zero vector.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("strategy must have at least one action"));
        }
        let mut sum = 0.0;
        for (k, w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite(format!("strategy weight {k}")));
            }
            if *w < 0.0 {
                return Err(Error::invalid(format!("strategy weight {k} is negative ({w})")));
            }
            sum += w;
        }
        if sum <= 0.0 {
            return Err(Error::invalid("strategy weights sum to zero"));
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self { weights })
    }

    /// The uniform strategy `(1/K, ..., 1/K)`.
    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "K must be positive");
        Self { weights: vec![1.0 / k as f64; k] }
    }

    /// The pure strategy `e_action`.
    pub fn pure(k: usize, action: usize) -> Self {
        assert!(action < k, "action out of range");
        let mut weights = vec![0.0; k];
        weights[action] = 1.0;
        Self { weights }
    }

    /// Number of actions `K`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // K >= 1 by construction
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Checks the simplex invariants; useful in tests and debug assertions.
    pub fn is_valid(&self) -> bool {
        self.weights.iter().all(|w| w.is_finite() && *w >= 0.0)
            && (self.weights.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL
    }
}

impl std::ops::Deref for Strategy {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.weights
    }
}

impl TryFrom<Vec<f64>> for Strategy {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Strategy::new(v)
    }
}

impl From<Strategy> for Vec<f64> {
    fn from(s: Strategy) -> Self {
        s.weights
    }
}

/// One strategy per agent, all over the same action count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointProfile {
    strategies: Vec<Strategy>,
}

impl JointProfile {
    pub fn new(strategies: Vec<Strategy>) -> Result<Self> {
        if strategies.is_empty() {
            return Err(Error::invalid("joint profile must contain at least one agent"));
        }
        let k = strategies[0].len();
        for (j, s) in strategies.iter().enumerate() {
            if s.len() != k {
                return Err(Error::AgentDimensionMismatch {
                    agent: j,
                    what: "strategy length".into(),
                    expected: k,
                    actual: s.len(),
                });
            }
        }
        Ok(Self { strategies })
    }

    pub fn num_agents(&self) -> usize {
        self.strategies.len()
    }

    pub fn num_actions(&self) -> usize {
        self.strategies[0].len()
    }

    pub fn strategy(&self, agent: usize) -> &Strategy {
        &self.strategies[agent]
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    /// The `J - 1` opponent strategies of `agent`, in agent order.
    pub fn opponents_of(&self, agent: usize) -> Vec<Strategy> {
        self.strategies
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != agent)
            .map(|(_, s)| s.clone())
            .collect()
    }
}

/// Expected cost matrix `Phi^j(w^{-j})` of shape `d x K`: column `k` is the
/// expected payoff vector of pure action `k` against the opponents' product
/// distribution. Stored column-major so columns are contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostMatrix {
    dim: usize,
    actions: usize,
    /// Column-major entries: `data[k * dim + l]` is entry `(l, k)`.
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn zeros(dim: usize, actions: usize) -> Self {
        Self { dim, actions, data: vec![0.0; dim * actions] }
    }

    /// Builds from column vectors (one per action).
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::invalid("cost matrix must have at least one column"));
        }
        let dim = columns[0].len();
        let actions = columns.len();
        let mut data = Vec::with_capacity(dim * actions);
        for (k, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: format!("cost matrix column {k}"),
                    expected: dim,
                    actual: col.len(),
                });
            }
            data.extend_from_slice(col);
        }
        Ok(Self { dim, actions, data })
    }

    /// Payoff dimension `d` (number of rows).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Action count `K` (number of columns).
    pub fn actions(&self) -> usize {
        self.actions
    }

    pub fn entry(&self, l: usize, k: usize) -> f64 {
        self.data[k * self.dim + l]
    }

    pub fn entry_mut(&mut self, l: usize, k: usize) -> &mut f64 {
        &mut self.data[k * self.dim + l]
    }

    /// Column `k` as a contiguous slice.
    pub fn column(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `Phi^T z`: the per-action cost vector under context `z`.
    pub fn transpose_dot(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                what: "context vector for Phi^T z".into(),
                expected: self.dim,
                actual: z.len(),
            });
        }
        Ok((0..self.actions)
            .map(|k| dot(self.column(k), z))
            .collect())
    }

    /// Scales every entry by `factor`.
    pub fn scale(&self, factor: f64) -> CostMatrix {
        CostMatrix {
            dim: self.dim,
            actions: self.actions,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }
}

/// Plain inner product; both slices must have equal length.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `<z, Phi w>`: the expected cost of playing `w` against `Phi` under
/// context `z`.
pub fn expected_cost(phi: &CostMatrix, w: &Strategy, z: &[f64]) -> Result<f64> {
    if w.len() != phi.actions() {
        return Err(Error::DimensionMismatch {
            what: "strategy for <z, Phi w>".into(),
            expected: phi.actions(),
            actual: w.len(),
        });
    }
    if z.len() != phi.dim() {
        return Err(Error::DimensionMismatch {
            what: "context vector for <z, Phi w>".into(),
            expected: phi.dim(),
            actual: z.len(),
        });
    }
    let mut total = 0.0;
    for (k, wk) in w.iter().enumerate() {
        total += wk * dot(phi.column(k), z);
    }
    Ok(total)
}
