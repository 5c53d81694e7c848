//! Exact arithmetic in a number field K = Q[t]/(m(t)).
//!
//! Elements are stored as coordinate vectors in the power basis
//! 1, t, ..., t^(deg-1). The minimal polynomial is only checked for being
//! squarefree; a reducible one surfaces as [`Error::ZeroDivisor`] on inversion.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone)]
pub struct NumberField {
    generator: String,
    /// Monic, constant term first; length = degree + 1.
    minpoly: Vec<Rational>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// The rationals, presented as Q[t]/(t).
    pub fn rationals() -> Arc<Self> {
        Arc::new(NumberField {
            generator: "t".to_string(),
            minpoly: vec![Rational::zero(), Rational::one()],
        })
    }

    /// Declares K = Q[t]/(m(t)) from the coefficients of m, constant term first.
    /// A non-monic m is rescaled; m must have degree >= 1 and be squarefree.
    pub fn new(generator: &str, coeffs: Vec<Rational>) -> Result<Arc<Self>> {
        let mut m = coeffs;
        upoly_trim(&mut m);
        if m.len() < 2 {
            return Err(Error::InvalidField(
                "minimal polynomial must have degree >= 1".into(),
            ));
        }
        let lead = m.last().unwrap().clone();
        for c in m.iter_mut() {
            *c = &*c / &lead;
        }
        let dm = upoly_derivative(&m);
        let g = upoly_gcd(&m, &dm);
        if g.len() > 1 {
            return Err(Error::InvalidField(
                "minimal polynomial is not squarefree".into(),
            ));
        }
        Ok(Arc::new(NumberField {
            generator: generator.to_string(),
            minpoly: m,
        }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.minpoly
    }

    pub fn generator_name(&self) -> &str {
        &self.generator
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn same(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
        Arc::ptr_eq(a, b) || a.minpoly == b.minpoly
    }
}

#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && NumberField::same(&self.field, &other.field)
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement {
            field: field.clone(),
            coords: vec![Rational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational(field, Rational::one())
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[0] = q;
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, int(n))
    }

    /// The class of t. In Q = Q[t]/(t) this is zero.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, vec![Rational::zero(), Rational::one()])
    }

    /// Reduces an arbitrary polynomial in t (constant term first) modulo m.
    pub fn from_poly(field: &Arc<NumberField>, mut p: Vec<Rational>) -> Self {
        reduce_mod(&mut p, &field.minpoly);
        p.resize(field.degree(), Rational::zero());
        FieldElement {
            field: field.clone(),
            coords: p,
        }
    }

    pub fn from_coords(field: &Arc<NumberField>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::ArityMismatch {
                expected: field.degree(),
                found: coords.len(),
            });
        }
        Ok(FieldElement {
            field: field.clone(),
            coords,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if NumberField::same(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coords,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Self::from_rational(&self.field, a * b);
        }
        if let Some(a) = self.as_rational() {
            return other.scale(a);
        }
        if let Some(b) = other.as_rational() {
            return self.scale(b);
        }
        let d = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_poly(&self.field, prod)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Inverse by the extended Euclidean algorithm on (coords, minpoly).
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let mut a = self.coords.clone();
        upoly_trim(&mut a);
        let (g, s, _) = upoly_xgcd(&a, &self.field.minpoly);
        if g.len() != 1 {
            return Err(Error::ZeroDivisor);
        }
        let inv_g = g[0].recip();
        let s: Vec<Rational> = s.into_iter().map(|c| c * &inv_g).collect();
        Ok(Self::from_poly(&self.field, s))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        result
    }
}

macro_rules! field_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics on mixed fields; use the `checked_*` methods at API boundaries.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field element arithmetic")
            }
        }
        impl std::ops::$tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("field element arithmetic")
            }
        }
    };
}

field_binop!(Add, add, checked_add);
field_binop!(Sub, sub, checked_sub);
field_binop!(Mul, mul, checked_mul);
field_binop!(Div, div, checked_div);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.field.generator_name();
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    write!(f, "{}", g)?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// ---- dense univariate polynomials over Q, constant term first ----

pub(crate) fn upoly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_derivative(p: &[Rational]) -> Vec<Rational> {
    let mut d: Vec<Rational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * int(k as i64))
        .collect();
    upoly_trim(&mut d);
    d
}

fn reduce_mod(p: &mut Vec<Rational>, m: &[Rational]) {
    let d = m.len() - 1;
    while p.len() > d {
        let c = p.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = p.len() - d;
        for j in 0..d {
            if !m[j].is_zero() {
                p[shift + j] -= &c * &m[j];
            }
        }
    }
}

/// Quotient and remainder of a by nonzero b.
pub(crate) fn upoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    upoly_trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for j in 0..=db {
            r[k + j] -= &c * &b[j];
        }
        q[k] = c;
        upoly_trim(&mut r);
    }
    upoly_trim(&mut q);
    (q, r)
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    upoly_trim(&mut out);
    out
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    upoly_trim(&mut out);
    out
}

pub(crate) fn upoly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    upoly_xgcd(a, b).0
}

/// Returns (g, s, t) with s*a + t*b = g.
fn upoly_xgcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    upoly_trim(&mut r0);
    upoly_trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = upoly_divrem(&r0, &r1);
        let s2 = upoly_sub(&s0, &upoly_mul(&q, &s1));
        let t2 = upoly_sub(&t0, &upoly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    (r0, s0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Arc<NumberField> {
        NumberField::new("t", vec![int(-2), int(0), int(1)]).unwrap()
    }

    fn el(k: &Arc<NumberField>, c: &[i64]) -> FieldElement {
        FieldElement::from_poly(k, c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn conjugate_sum_and_product() {
        let k = sqrt2();
        let a = el(&k, &[1, 1]);
        let b = el(&k, &[1, -1]);
        assert_eq!(&a + &b, el(&k, &[2]));
        assert_eq!(&a * &b, el(&k, &[-1]));
        let s = FieldElement::generator(&k);
        assert_eq!(&s * &s, el(&k, &[2]));
        assert_eq!(&a + &FieldElement::zero(&k), a);
        assert_eq!(&a * &FieldElement::one(&k), a);
    }

    #[test]
    fn rational_arithmetic() {
        let q = NumberField::rationals();
        let a = FieldElement::from_rational(&q, rat(1, 2));
        let b = FieldElement::from_rational(&q, rat(1, 3));
        assert_eq!(&a + &b, FieldElement::from_rational(&q, rat(5, 6)));
        assert_eq!(
            FieldElement::from_int(&q, 2).inverse().unwrap(),
            FieldElement::from_rational(&q, rat(1, 2))
        );
    }

    #[test]
    fn inverse_by_extended_euclid() {
        let k = sqrt2();
        let a = el(&k, &[1, 1]);
        assert_eq!(a.inverse().unwrap(), el(&k, &[-1, 1]));
        assert_eq!(FieldElement::zero(&k).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_divisor_in_reducible_field() {
        // m = t^2 - 1 is squarefree but reducible
        let k = NumberField::new("t", vec![int(-1), int(0), int(1)]).unwrap();
        let a = el(&k, &[1, 1]);
        assert_eq!(a.inverse(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn rejects_non_squarefree_minpoly() {
        let r = NumberField::new("t", vec![int(1), int(2), int(1)]);
        assert!(matches!(r, Err(Error::InvalidField(_))));
        assert!(NumberField::new("t", vec![int(3)]).is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let k = sqrt2();
        let q = NumberField::rationals();
        let a = FieldElement::one(&k);
        let b = FieldElement::one(&q);
        assert_eq!(a.checked_add(&b), Err(Error::MixedFields));
        assert_eq!(a.checked_mul(&b), Err(Error::MixedFields));
    }

    #[test]
    fn display_power_basis() {
        let k = sqrt2();
        assert_eq!(el(&k, &[1, -1]).to_string(), "-t + 1");
        assert_eq!(FieldElement::from_rational(&k, rat(-5, 6)).to_string(), "-5/6");
        assert_eq!(FieldElement::zero(&k).to_string(), "0");
    }
}
