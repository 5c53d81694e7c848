//! Dense linear algebra over a number field (row-major `Vec<Vec<_>>`).

use std::sync::Arc;

use crate::scalars::{int, FieldElement, NumberField};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        if r >= m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..ncols {
                    if !m[r][k].is_zero() {
                        let t = &f * &m[r][k];
                        m[i][k] = &m[i][k] - &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix, ncols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

/// Basis of { v : m v = 0 }, one vector per free column (free entry = 1).
pub fn kernel(m: &Matrix, ncols: usize, field: &Arc<NumberField>) -> Vec<Vec<FieldElement>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElement::zero(field); ncols];
            v[f] = FieldElement::one(field);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][f];
            }
            v
        })
        .collect()
}

/// Reduced row echelon basis of the span of `vectors`.
pub fn echelon_basis(vectors: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut a = vectors.to_vec();
    let k = rref(&mut a, ncols).len();
    a.truncate(k);
    a
}

pub fn mat_vec(m: &Matrix, v: &[FieldElement], field: &Arc<NumberField>) -> Vec<FieldElement> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(FieldElement::zero(field), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

/// Characteristic polynomial det(cI - T), constant term first (Faddeev-LeVerrier).
pub fn char_poly(t: &Matrix, field: &Arc<NumberField>) -> Vec<FieldElement> {
    let n = t.len();
    let zero = FieldElement::zero(field);
    let mut coeffs = vec![zero.clone(); n + 1];
    coeffs[n] = FieldElement::one(field);
    let mut mk: Matrix = vec![vec![zero.clone(); n]; n];
    for k in 1..=n {
        // M_k = T M_{k-1} + c_{n-k+1} I
        let mut next: Matrix = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for l in 0..n {
                    if !t[i][l].is_zero() && !mk[l][j].is_zero() {
                        acc = &acc + &(&t[i][l] * &mk[l][j]);
                    }
                }
                if i == j {
                    acc = &acc + &coeffs[n - k + 1];
                }
                next[i][j] = acc;
            }
        }
        mk = next;
        let mut tr = zero.clone();
        for i in 0..n {
            for l in 0..n {
                if !t[i][l].is_zero() && !mk[l][i].is_zero() {
                    tr = &tr + &(&t[i][l] * &mk[l][i]);
                }
            }
        }
        coeffs[n - k] = tr.scale(&(-int(1) / int(k as i64)));
    }
    coeffs
}
