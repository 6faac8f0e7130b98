//! The alternating two-player matrix game `A_t = B + (-1)^t C`, encoded in
//! the state-of-nature cost form: two contexts pick out the even-round and
//! odd-round matrices from a two-coordinate payoff vector.

use crate::error::{Error, Result};
use crate::game::TabularGame;
use crate::types::ContextSpace;

/// Context index realized on even rounds (`z = e_1`).
pub const CONTEXT_EVEN: usize = 0;
/// Context index realized on odd rounds (`z = e_2`).
pub const CONTEXT_ODD: usize = 1;

/// The payoff matrices and horizon of the alternating game.
#[derive(Debug, Clone)]
pub struct MatrixGameSequence {
    pub b: [[f64; 2]; 2],
    pub c: [[f64; 2]; 2],
    pub horizon: usize,
    /// Zero-sum reading: the column player's cost is the negated payoff.
    /// With the flag off both players share the row player's cost.
    pub zero_sum: bool,
}

/// Everything a run over the alternating game needs: the encoded game, its
/// two-context space and the deterministic context sequence.
#[derive(Debug, Clone)]
pub struct Example1 {
    pub sequence: MatrixGameSequence,
    pub game: TabularGame,
    pub contexts: ContextSpace,
    /// Realized context index per round (round `t` is 1-based, so round 1
    /// is odd).
    pub context_sequence: Vec<usize>,
}

impl MatrixGameSequence {
    pub fn standard(horizon: usize) -> Self {
        Self {
            b: [[0.5, 0.5], [0.5, 0.5]],
            c: [[0.5, 0.5], [-0.5, -0.5]],
            horizon,
            zero_sum: true,
        }
    }

    /// `A_t` for a 1-based round index.
    pub fn matrix_at(&self, t: usize) -> [[f64; 2]; 2] {
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        let mut a = [[0.0; 2]; 2];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.b[i][j] + sign * self.c[i][j];
            }
        }
        a
    }

    /// The matrices of rounds `1..=horizon`, for variation measures.
    pub fn matrices(&self) -> Vec<Vec<Vec<f64>>> {
        (1..=self.horizon)
            .map(|t| self.matrix_at(t).iter().map(|r| r.to_vec()).collect())
            .collect()
    }
}

/// Builds the alternating game for `T >= 1` rounds. The payoff vector of
/// the row player is `(A_even[a][b], A_odd[a][b])` so that the context
/// basis vectors reproduce the round's matrix entries; the column player
/// carries the negation under the zero-sum reading.
pub fn example1_game(horizon: usize) -> Result<Example1> {
    example1_game_with(MatrixGameSequence::standard(horizon))
}

pub fn example1_game_with(sequence: MatrixGameSequence) -> Result<Example1> {
    if sequence.horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let a_even = sequence.matrix_at(2);
    let a_odd = sequence.matrix_at(1);
    for matrix in [&a_even, &a_odd] {
        for row in matrix {
            for entry in row {
                if entry.abs() > 1.0 + 1e-12 {
                    return Err(Error::invalid(format!(
                        "matrix entries must lie in [-1, 1], got {entry}"
                    )));
                }
            }
        }
    }
    let zero_sum = sequence.zero_sum;
    let game = TabularGame::from_fn(2, 2, 2, move |agent, joint| {
        let payoff = [a_even[joint[0]][joint[1]], a_odd[joint[0]][joint[1]]];
        if agent == 0 || !zero_sum {
            payoff.to_vec()
        } else {
            vec![-payoff[0], -payoff[1]]
        }
    })?;
    let contexts = ContextSpace::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]])?
        .with_labels(vec!["even".into(), "odd".into()])?;
    let context_sequence = (1..=sequence.horizon)
        .map(|t| if t % 2 == 0 { CONTEXT_EVEN } else { CONTEXT_ODD })
        .collect();
    Ok(Example1 { sequence, game, contexts, context_sequence })
}
