//! Integer relation lattices among number-field elements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{FieldElement, NumberField};

/// A primitive basis of { l in Z^n : sum l_i e_i = 0 }.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerRelationBasis {
    pub relations: Vec<Vec<BigInt>>,
    pub n: usize,
}

impl IntegerRelationBasis {
    pub fn rank(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Relations as machine integers; `None` if an entry does not fit.
    pub fn as_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.relations
            .iter()
            .map(|v| v.iter().map(|x| i64::try_from(x).ok()).collect())
            .collect()
    }

    /// Membership test: is `v` an integer combination of the basis?
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.n {
            return false;
        }
        if self.relations.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        // solve c * B = v over Q, check integrality and consistency
        let rows: Vec<Vec<BigRational>> = self
            .relations
            .iter()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        match solve_left(&rows, &v.iter().cloned().map(BigRational::from_integer).collect::<Vec<_>>()) {
            Some(c) => c.iter().all(|x| x.is_integer()),
            None => false,
        }
    }
}

/// Solves c * rows = target for c (rows independent); `None` if inconsistent.
fn solve_left(rows: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let r = rows.len();
    let n = target.len();
    // augmented system: columns = unknowns c_0..c_{r-1}, one equation per coordinate
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..r).map(|i| rows[i][j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = vec![];
    for col in 0..r {
        let Some(p) = (pivot_row..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != pivot_row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for k in 0..=r {
                    let t = &f * &m[pivot_row][k];
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    let mut c = vec![BigRational::zero(); r];
    for (i, &col) in pivots.iter().enumerate() {
        c[col] = m[i][r].clone();
    }
    Some(c)
}

/// Basis of the integer kernel { x in Z^n : M x = 0 } via unimodular column
/// reduction. The basis is saturated because the transform is unimodular.
pub fn integer_kernel(matrix: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // column ops act on m[row][col] and u[row][col]
    let col_swap = |a: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };
    let col_axpy = |a: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    let mut k = 0;
    for row in 0..m.len() {
        if k >= ncols {
            break;
        }
        loop {
            let nz: Vec<usize> = (k..ncols).filter(|&c| !m[row][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&c| m[row][c].abs()).unwrap();
            col_swap(&mut m, k, best);
            col_swap(&mut u, k, best);
            if nz.len() == 1 {
                break;
            }
            for c in (k + 1)..ncols {
                if m[row][c].is_zero() {
                    continue;
                }
                let q = m[row][c].div_floor(&m[row][k]);
                col_axpy(&mut m, c, k, &q);
                col_axpy(&mut u, c, k, &q);
            }
        }
        if !m[row][k].is_zero() {
            k += 1;
        }
    }
    (k..ncols).map(|c| u.iter().map(|r| r[c].clone()).collect()).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact LLL reduction (delta = 99/100) of linearly independent integer rows.
pub fn lll_reduce(basis: &mut Vec<Vec<BigInt>>) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let gram_schmidt = |b: &Vec<Vec<BigInt>>| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let n = b.len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut bstar: Vec<Vec<BigRational>> = vec![];
        let mut norms = vec![];
        for i in 0..n {
            let mut v: Vec<BigRational> = b[i].iter().cloned().map(BigRational::from_integer).collect();
            for j in 0..i {
                let num: BigRational = b[i]
                    .iter()
                    .zip(&bstar[j])
                    .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
                    .sum();
                mu[i][j] = num / &norms[j];
                for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                    *vk -= &mu[i][j] * bk;
                }
            }
            let nn: BigRational = v.iter().map(|x| x * x).sum();
            norms.push(nn);
            bstar.push(v);
        }
        (mu, norms)
    };
    let mut k = 1;
    let (mut mu, mut norms) = gram_schmidt(basis);
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = mu[k][j].round().to_integer();
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let recomputed = gram_schmidt(basis);
                mu = recomputed.0;
                norms = recomputed.1;
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let recomputed = gram_schmidt(basis);
            mu = recomputed.0;
            norms = recomputed.1;
            k = (k - 1).max(1);
        }
    }
}

fn canonical_sign(v: &mut [BigInt]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// Primitive basis of the integer relations among `elems`, computed from the
/// rational kernel of their (degree x n) coordinate matrix.
pub fn q_linear_relation_lattice(elems: &[FieldElement]) -> Result<IntegerRelationBasis> {
    let Some(first) = elems.first() else {
        return Ok(IntegerRelationBasis { relations: vec![], n: 0 });
    };
    let field = first.field().clone();
    if elems.iter().any(|e| !NumberField::same(e.field(), &field)) {
        return Err(Error::MixedFields);
    }
    let n = elems.len();
    let d = field.degree();
    let mut matrix = Vec::with_capacity(d);
    for row in 0..d {
        let entries: Vec<&BigRational> = elems.iter().map(|e| &e.coords()[row]).collect();
        let lcm = entries
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        matrix.push(
            entries
                .iter()
                .map(|q| (*q * BigRational::from_integer(lcm.clone())).to_integer())
                .collect::<Vec<BigInt>>(),
        );
    }
    let mut relations = integer_kernel(&matrix, n);
    lll_reduce(&mut relations);
    for v in relations.iter_mut() {
        canonical_sign(v);
    }
    relations.sort_by(|a, b| dot(a, a).cmp(&dot(b, b)).then_with(|| b.cmp(a)));
    Ok(IntegerRelationBasis { relations, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;
    use std::sync::Arc;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn gcd_all(v: &[BigInt]) -> BigInt {
        v.iter().fold(BigInt::zero(), |a, b| a.gcd(b))
    }

    #[test]
    fn relations_of_one_two_three() {
        let q = NumberField::rationals();
        let e: Vec<_> = [1, 2, 3].iter().map(|&x| FieldElement::from_int(&q, x)).collect();
        let b = q_linear_relation_lattice(&e).unwrap();
        assert_eq!(b.rank(), 2);
        assert!(b.relations.contains(&bi(&[1, 1, -1])));
        assert!(b.contains(&bi(&[2, -1, 0])));
        assert!(!b.contains(&bi(&[1, 0, 0])));
    }

    #[test]
    fn sqrt2_sqrt3_are_independent() {
        // Q(sqrt2 + sqrt3), m = t^4 - 10 t^2 + 1
        let k = NumberField::new("t", vec![int(1), int(0), int(-10), int(0), int(1)]).unwrap();
        let half = crate::scalars::rat(1, 2);
        let s2 = FieldElement::from_poly(&k, vec![int(0), int(-9), int(0), int(1)]).scale(&half);
        let s3 = FieldElement::from_poly(&k, vec![int(0), int(11), int(0), int(-1)]).scale(&half);
        assert_eq!(&s2 * &s2, FieldElement::from_int(&k, 2));
        assert_eq!(&s3 * &s3, FieldElement::from_int(&k, 3));
        let b = q_linear_relation_lattice(&[FieldElement::one(&k), s2, s3]).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn zero_entry_gives_unit_relation() {
        let k: Arc<NumberField> = NumberField::new("t", vec![int(-2), int(0), int(0), int(1)]).unwrap();
        let a = FieldElement::one(&k);
        let g = FieldElement::generator(&k);
        let b = q_linear_relation_lattice(&[a, FieldElement::zero(&k), g]).unwrap();
        assert_eq!(b.relations, vec![bi(&[0, 1, 0])]);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel generated by (2, -1), not (4, -2)
        let k = integer_kernel(&[bi(&[2, 4])], 2);
        assert_eq!(k.len(), 1);
        assert!(gcd_all(&k[0]).is_one());
    }
}
