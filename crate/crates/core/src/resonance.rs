//! Resonances among eigenvalue tuples.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::sync::Arc;

use crate::blowup::BlowupChart;
use crate::error::{Error, Result};
use crate::lattice::{q_linear_relation_lattice, IntegerRelationBasis};
use crate::linalg;
use crate::scalars::{FieldElement, NumberField};

/// Eigenvalues (a_1, ..., a_n) of a diagonal linear part, n >= 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenvalues {
    values: Vec<FieldElement>,
}

impl Eigenvalues {
    pub fn new(values: Vec<FieldElement>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Dimension {
                required: "at least 2 eigenvalues",
                found: values.len(),
            });
        }
        let f = values[0].field();
        if values.iter().any(|v| !NumberField::same(v.field(), f)) {
            return Err(Error::MixedFields);
        }
        Ok(Eigenvalues { values })
    }

    pub fn from_ints(field: &Arc<NumberField>, vals: &[i64]) -> Result<Self> {
        Self::new(vals.iter().map(|&v| FieldElement::from_int(field, v)).collect())
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.values[0].field()
    }
}

pub fn strong_resonances(a: &Eigenvalues) -> Result<IntegerRelationBasis> {
    q_linear_relation_lattice(&a.values)
}

pub fn is_strongly_diagonalizable(a: &Eigenvalues) -> bool {
    strong_resonances(a).map(|b| b.is_empty()).unwrap_or(false)
}

/// Outcome of a nonnegative resonance search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonnegResonance {
    /// Smallest relation found, by (max entry, sum, lexicographic).
    pub relation: Option<Vec<i64>>,
    pub bound: u64,
    /// The absence of a relation is proven for every bound, not just `bound`.
    pub exact: bool,
}

/// Searches for m in Z_{>=0}^n, m != 0, max m_i <= bound, with sum m_i a_i = 0.
/// Only lattice points are enumerated: pivot coordinates range over the box
/// and the remaining ones are solved for.
pub fn nonneg_resonance_search(a: &Eigenvalues, bound: u64) -> Result<NonnegResonance> {
    let lattice = strong_resonances(a)?;
    let n = a.len();
    let none = |exact| NonnegResonance {
        relation: None,
        bound,
        exact,
    };
    if lattice.is_empty() {
        return Ok(none(true));
    }
    if lattice.rank() == 1 {
        let g = &lattice.relations[0];
        let signed = if g.iter().all(|x| !x.is_negative()) {
            g.clone()
        } else if g.iter().all(|x| !x.is_positive()) {
            g.iter().map(|x| -x).collect()
        } else {
            return Ok(none(true));
        };
        let max = signed.iter().max().cloned().unwrap_or_default();
        if max > BigInt::from(bound) {
            return Ok(none(false));
        }
        return Ok(NonnegResonance {
            relation: Some(signed.iter().map(|x| x.to_i64().unwrap()).collect()),
            bound,
            exact: true,
        });
    }
    let q = NumberField::rationals();
    let r = lattice.rank();
    let basis: Vec<Vec<FieldElement>> = lattice
        .relations
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| FieldElement::from_rational(&q, BigRational::from_integer(x.clone())))
                .collect()
        })
        .collect();
    // pivot columns of the r x n basis matrix
    let mut echelon = basis.clone();
    let pivots = linalg::rref(&mut echelon, n);
    debug_assert_eq!(pivots.len(), r);
    // v = c B and v_P = c B_P, so c = v_P B_P^{-1}; express via the rref rows:
    // echelon = E B with E invertible, and echelon restricted to P is the identity,
    // hence v = v_P * echelon.
    let mut best: Option<Vec<i64>> = None;
    let mut point = vec![0u64; r];
    loop {
        if point.iter().any(|&p| p > 0) {
            if let Some(v) = lattice_point(&echelon, &point, n, bound) {
                let better = match &best {
                    None => true,
                    Some(b) => order_key(&v) < order_key(b),
                };
                if better {
                    best = Some(v);
                }
            }
        }
        // odometer over [0, bound]^r
        let mut i = 0;
        loop {
            if i == r {
                return Ok(match best {
                    Some(v) => NonnegResonance {
                        relation: Some(v),
                        bound,
                        exact: true,
                    },
                    None => none(false),
                });
            }
            if point[i] < bound {
                point[i] += 1;
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

fn lattice_point(echelon: &[Vec<FieldElement>], point: &[u64], n: usize, bound: u64) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let mut acc = BigRational::zero();
        for (row, &p) in echelon.iter().zip(point) {
            if p > 0 {
                acc += row[col].as_rational().unwrap() * BigRational::from_integer(BigInt::from(p));
            }
        }
        if !acc.is_integer() || acc.is_negative() || acc > BigRational::from_integer(BigInt::from(bound)) {
            return None;
        }
        out.push(acc.to_integer().to_i64()?);
    }
    Some(out)
}

fn order_key(v: &[i64]) -> (i64, i64, Vec<i64>) {
    (*v.iter().max().unwrap(), v.iter().sum(), v.to_vec())
}

/// Eigenvalues of the strict transform of a diagonal field in a blow-up chart.
pub fn blowup_eigenvalue_law(a: &Eigenvalues, chart: &BlowupChart) -> Result<Eigenvalues> {
    chart.validate(a.len())?;
    let k = chart.exceptional();
    let ak = a.values[k].clone();
    let divided = chart.divided(a.len());
    let values = a
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| if divided.contains(&i) { v - &ak } else { v.clone() })
        .collect();
    Eigenvalues::new(values)
}
