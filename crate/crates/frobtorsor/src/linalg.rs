//! Exact Gaussian elimination over F_{p^e}.
//!
//! Deterministic by construction: pivots are chosen as the first nonzero
//! entry in row order, and nullspace basis vectors are emitted per free
//! column in increasing column order with a unit in the free slot.  Rank is
//! invariant under field extension, so ranks computed here over F_q agree
//! with ranks over any extension of F_q.

use crate::algebra::{FieldSpec, Fq};

/// Reduces `rows` in place to row-echelon form; returns the pivot columns in
/// increasing order.
fn echelonize(rows: &mut [Vec<Fq>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(found) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, found);
        let inv = rows[next_row][col].inv().expect("nonzero pivot");
        for x in rows[next_row].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..rows.len() {
            if r != next_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let delta = factor.mul(&rows[next_row][c]);
                    rows[r][c] = rows[r][c].sub(&delta);
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    pivots
}

/// The rank of the row span.
pub fn rank(mut rows: Vec<Vec<Fq>>, ncols: usize) -> usize {
    echelonize(&mut rows, ncols).len()
}

/// A basis of the solution space {x : R·x = 0}, one vector per free column
/// in increasing column order, each with a unit in its free slot.
pub fn nullspace(mut rows: Vec<Vec<Fq>>, ncols: usize, field: FieldSpec) -> Vec<Vec<Fq>> {
    let pivots = echelonize(&mut rows, ncols);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut vec = vec![field.zero(); ncols];
        vec[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            // Pivot rows are normalized, so x[pc] = -R[r][free].
            vec[pc] = rows[r][free].neg();
        }
        basis.push(vec);
    }
    basis
}
