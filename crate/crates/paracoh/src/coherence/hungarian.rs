//! Optimal one-to-one assignment (Kuhn–Munkres / Jonker-Volgenant style,
//! O(n^3) with potentials).

use super::CoherenceError;

/// Solves the rectangular assignment problem. Returns `min(rows, cols)`
/// disjoint `(row, column)` pairs whose total value is maximal (or minimal
/// when `maximize` is false), sorted by row.
///
/// Entries must be finite; the matrix must be non-empty and rectangular.
pub fn assign_hungarian(
    matrix: &[Vec<f64>],
    maximize: bool,
) -> Result<Vec<(usize, usize)>, CoherenceError> {
    if matrix.is_empty() || matrix[0].is_empty() {
        return Err(CoherenceError::EmptyMatrix);
    }
    let cols = matrix[0].len();
    for (r, row) in matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(CoherenceError::RaggedMatrix { row: r });
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(CoherenceError::NonFiniteEntry { row: r, col: c });
        }
    }
    let rows = matrix.len();
    let transposed = rows > cols;
    let (n, m) = if transposed {
        (cols, rows)
    } else {
        (rows, cols)
    };
    let sign = if maximize { -1.0 } else { 1.0 };
    let cost = |i: usize, j: usize| -> f64 {
        let v = if transposed {
            matrix[j][i]
        } else {
            matrix[i][j]
        };
        sign * v
    };

    // Potentials u/v and the column assignment p (1-based; p[j] = 0 is free).
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        // Walk the augmenting path back to the root.
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut result = Vec::with_capacity(n);
    for (j, &row_1based) in p.iter().enumerate().skip(1) {
        if row_1based != 0 {
            let (row, col) = if transposed {
                (j - 1, row_1based - 1)
            } else {
                (row_1based - 1, j - 1)
            };
            result.push((row, col));
        }
    }
    result.sort_unstable();
    Ok(result)
}
