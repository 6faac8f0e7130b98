//! Time-variation measures of a matrix sequence.

use crate::error::{Error, Result};

/// `(V, W)` of a matrix sequence under the max-absolute-entry norm:
///
/// * `V = sum_t ||A_t - A_{t-1}||^2` with the boundary `A_0 = A_1`, so the
///   first difference contributes nothing;
/// * `W = sum_t ||A_t - mean(A)||`.
///
/// Matrices are row-major `Vec<Vec<f64>>` of a common shape.
pub fn variation_measures(matrices: &[Vec<Vec<f64>>]) -> Result<(f64, f64)> {
    if matrices.is_empty() {
        return Err(Error::invalid("variation measures need at least one matrix"));
    }
    let rows = matrices[0].len();
    let cols = matrices[0].first().map_or(0, Vec::len);
    for (t, a) in matrices.iter().enumerate() {
        if a.len() != rows || a.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid(format!("matrix {t} has a different shape")));
        }
    }

    let max_entry = |a: &[Vec<f64>], b: Option<&[Vec<f64>]>| -> f64 {
        let mut peak = 0.0f64;
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let v = match b {
                    Some(b) => x - b[i][j],
                    None => *x,
                };
                peak = peak.max(v.abs());
            }
        }
        peak
    };

    let mut v = 0.0;
    for t in 1..matrices.len() {
        v += max_entry(&matrices[t], Some(&matrices[t - 1])).powi(2);
    }

    let n = matrices.len() as f64;
    let mut mean = vec![vec![0.0f64; cols]; rows];
    for a in matrices {
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                mean[i][j] += x / n;
            }
        }
    }
    let mut w = 0.0;
    for a in matrices {
        w += max_entry(a, Some(&mean));
    }

    Ok((v, w))
}
