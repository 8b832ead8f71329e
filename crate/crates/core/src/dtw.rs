//! Dynamic time warping over one-dimensional sequences, plus the lock-step
//! distance it is compared against.
//!
//! Indices in [`CostMatrix`] and [`WarpPath`] are 0-based.

use serde::Serialize;

use crate::error::{Error, Result};

/// Weighted one-dimensional Euclidean distance, `weight * |a - b|`.
#[inline]
pub fn point_distance(a: f64, b: f64, weight: f64) -> f64 {
    weight * (a - b).abs()
}

/// Cumulative alignment costs, row-major with one row per element of `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
}

impl CostMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols + j]
    }

    /// Cost of the optimal full alignment.
    pub fn distance(&self) -> f64 {
        self.get(self.rows - 1, self.cols - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WarpPath(pub Vec<(usize, usize)>);

impl WarpPath {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    /// Starts at (0, 0), ends at (m - 1, n - 1), and every step advances one
    /// or both indices by exactly one.
    pub fn is_valid(&self, rows: usize, cols: usize) -> bool {
        let p = &self.0;
        if p.first() != Some(&(0, 0)) || p.last() != Some(&(rows - 1, cols - 1)) {
            return false;
        }
        p.windows(2).all(|w| {
            let di = w[1].0.wrapping_sub(w[0].0);
            let dj = w[1].1.wrapping_sub(w[0].1);
            matches!((di, dj), (1, 0) | (0, 1) | (1, 1))
        })
    }
}

/// Fills the cumulative cost matrix with
/// `g(i, j) = d(y_i, z_j) + min(g(i-1, j-1), g(i-1, j), g(i, j-1))`.
pub fn dtw_distance(y: &[f64], z: &[f64], weight: f64) -> Result<(f64, CostMatrix)> {
    if y.is_empty() || z.is_empty() {
        return Err(Error::EmptySeries);
    }
    check_weight(weight)?;
    let (rows, cols) = (y.len(), z.len());
    let mut cells = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let local = point_distance(y[i], z[j], weight);
            let best = match (i, j) {
                (0, 0) => 0.0_f64,
                (0, _) => cells[j - 1],
                (_, 0) => cells[(i - 1) * cols],
                _ => {
                    let diag = cells[(i - 1) * cols + j - 1];
                    let up = cells[(i - 1) * cols + j];
                    let left = cells[i * cols + j - 1];
                    diag.min(up).min(left)
                }
            };
            cells[i * cols + j] = local + best;
        }
    }
    let matrix = CostMatrix { rows, cols, cells };
    Ok((matrix.distance(), matrix))
}

/// DTW distance alone, with a rolling row instead of the full matrix.
pub fn dtw(y: &[f64], z: &[f64], weight: f64) -> Result<f64> {
    if y.is_empty() || z.is_empty() {
        return Err(Error::EmptySeries);
    }
    check_weight(weight)?;
    let mut prev = vec![f64::INFINITY; z.len()];
    let mut curr = vec![0.0; z.len()];
    for (i, &yi) in y.iter().enumerate() {
        for (j, &zj) in z.iter().enumerate() {
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                let left = if j > 0 { curr[j - 1] } else { f64::INFINITY };
                let diag = if j > 0 { prev[j - 1] } else { f64::INFINITY };
                diag.min(prev[j]).min(left)
            };
            curr[j] = point_distance(yi, zj, weight) + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Ok(prev[z.len() - 1])
}

fn check_weight(weight: f64) -> Result<()> {
    if weight > 0.0 && weight.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "DTW weight must be positive, got {weight}"
        )))
    }
}

/// Backtracks the optimal alignment from the last cell. Ties prefer the
/// diagonal predecessor, then `(i-1, j)`, then `(i, j-1)`.
pub fn warp_path(matrix: &CostMatrix) -> WarpPath {
    let (mut i, mut j) = (matrix.rows - 1, matrix.cols - 1);
    let mut pairs = vec![(i, j)];
    while (i, j) != (0, 0) {
        (i, j) = if i == 0 {
            (0, j - 1)
        } else if j == 0 {
            (i - 1, 0)
        } else {
            let diag = matrix.get(i - 1, j - 1);
            let up = matrix.get(i - 1, j);
            let left = matrix.get(i, j - 1);
            if diag <= up && diag <= left {
                (i - 1, j - 1)
            } else if up <= left {
                (i - 1, j)
            } else {
                (i, j - 1)
            }
        };
        pairs.push((i, j));
    }
    pairs.reverse();
    WarpPath(pairs)
}

/// Lock-step distance `sum |y_i - z_i|` under the same point metric.
pub fn euclidean_distance(y: &[f64], z: &[f64]) -> Result<f64> {
    euclidean_distance_weighted(y, z, 1.0)
}

pub fn euclidean_distance_weighted(y: &[f64], z: &[f64], weight: f64) -> Result<f64> {
    if y.len() != z.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: z.len(),
        });
    }
    Ok(y.iter().zip(z).map(|(a, b)| point_distance(*a, *b, weight)).sum())
}

/// Zero-mean, unit-variance copy; constant input maps to all zeros.
pub fn znormalize(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    if std > 0.0 {
        values.iter().map(|v| (v - mean) / std).collect()
    } else {
        vec![0.0; values.len()]
    }
}
