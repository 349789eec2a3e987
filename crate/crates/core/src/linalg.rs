//! Dense linear algebra over `F_q` and rank over `F_q(t)`.

use crate::field::{Fe, Fq};
use crate::poly::Poly;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Fe>>, ncols: usize, field: &Fq) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(rows[rank][col]).expect("pivot nonzero");
        for c in col..ncols {
            rows[rank][c] = field.mul(rows[rank][c], inv);
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col];
            for c in col..ncols {
                let sub = field.mul(f, rows[rank][c]);
                rows[r][c] = field.sub(rows[r][c], sub);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// Rank of a dense matrix over `F_q` (rows consumed).
pub fn rank_fq(mut rows: Vec<Vec<Fe>>, field: &Fq) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    rref(&mut rows, ncols, field).len()
}

/// Rank of a row-major matrix with `cols` columns, eliminated in place.
pub fn rank_flat(mut a: Vec<Fe>, cols: usize, field: &Fq) -> usize {
    if cols == 0 {
        return 0;
    }
    let rows = a.len() / cols;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
            continue;
        };
        if piv != rank {
            for c in col..cols {
                a.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = field.inv(a[rank * cols + col]).expect("pivot nonzero");
        for r in rank + 1..rows {
            let f = a[r * cols + col];
            if f.is_zero() {
                continue;
            }
            let f = field.mul(f, inv);
            for c in col..cols {
                let sub = field.mul(f, a[rank * cols + c]);
                a[r * cols + c] = field.sub(a[r * cols + c], sub);
            }
        }
        rank += 1;
    }
    rank
}

/// A basis of `{x : A x = 0}` for the `ncols`-column matrix `A`.
pub fn nullspace_fq(mut rows: Vec<Vec<Fe>>, ncols: usize, field: &Fq) -> Vec<Vec<Fe>> {
    let pivots = rref(&mut rows, ncols, field);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Fe::ZERO; ncols];
            v[free] = Fe::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(rows[r][free]);
            }
            v
        })
        .collect()
}

/// Rank over `F_q(t)` of a list of polynomial vectors, by fraction-free elimination.
pub fn rank_poly(mut rows: Vec<Vec<Poly>>, field: &Fq) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot_row = rows[rank].clone();
        let p = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in col..ncols {
                row[c] = row[c].mul(&p, field).sub(&pivot_row[c].mul(&f, field), field);
            }
        }
        rank += 1;
    }
    rank
}
