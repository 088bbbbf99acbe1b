//! Dense exact linear algebra over the rationals: row reduction, kernels,
//! and solving. Shared by the ideal, matrix, and affine modules.

use num::{One, Zero};

use crate::rat::Rat;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row, in order. Zero rows are removed.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pivot_row);
        let inv = Rat::one() / rows[row][col].clone();
        for c in col..ncols {
            let v = rows[row][c].clone() * inv.clone();
            rows[row][c] = v;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let delta = rows[row][c].clone() * factor.clone();
                    rows[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rows.truncate(row);
    pivots
}

/// Basis of the right kernel `{v : M v = 0}` in reduced echelon form with
/// the free variable of each basis vector set to 1. Deterministic: free
/// columns are visited in increasing order.
pub fn kernel_basis(mut rows: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    for r in &rows {
        assert_eq!(r.len(), ncols);
    }
    let pivots = rref(&mut rows);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `M x = b` for one solution; `None` if inconsistent.
pub fn solve(matrix: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = matrix.len();
    assert_eq!(b.len(), nrows);
    let ncols = matrix.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<Rat>> = matrix
        .iter()
        .zip(b)
        .map(|(r, bv)| r.iter().cloned().chain([bv.clone()]).collect())
        .collect();
    let pivots = rref(&mut aug);
    let mut x = vec![Rat::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        if p == ncols {
            return None; // pivot in the augmented column
        }
        x[p] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Rank of the matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut copy: Vec<Vec<Rat>> = rows.to_vec();
    rref(&mut copy);
    copy.len()
}
