use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::scalars::{int, FieldElement, NumberField};

/// Exponent vector. Ordered graded-lexicographically with x1 > x2 > ... .
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over a number field.
#[derive(Clone, Debug)]
pub struct Poly {
    field: Arc<NumberField>,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for Poly {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact sparse arithmetic with field and arity checks.
pub fn poly_arith(p: &Poly, q: &Poly, op: PolyOp) -> Result<Poly> {
    p.compatible(q)?;
    Ok(match op {
        PolyOp::Add => p.add(q),
        PolyOp::Sub => p.sub(q),
        PolyOp::Mul => p.mul(q),
    })
}

impl Poly {
    pub fn zero(field: &Arc<NumberField>, nvars: usize) -> Self {
        Poly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<NumberField>, nvars: usize) -> Self {
        Self::constant(FieldElement::one(field), nvars)
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Self {
        Self::monomial(c, Monomial::one(nvars))
    }

    pub fn from_int(field: &Arc<NumberField>, nvars: usize, n: i64) -> Self {
        Self::constant(FieldElement::from_int(field, n), nvars)
    }

    pub fn monomial(c: FieldElement, m: Monomial) -> Self {
        let field = c.field().clone();
        let nvars = m.0.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { field, nvars, terms }
    }

    /// The coordinate function x_i (0-based).
    pub fn var(field: &Arc<NumberField>, nvars: usize, i: usize) -> Self {
        Self::monomial(FieldElement::one(field), Monomial::var(nvars, i))
    }

    pub fn from_terms(
        field: &Arc<NumberField>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.is_constant() {
            Some(self.coefficient(&Monomial::one(self.nvars)))
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElement> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Order at the origin: minimal total degree of a term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub(crate) fn compatible(&self, other: &Poly) -> Result<()> {
        if !NumberField::same(&self.field, &other.field) {
            return Err(Error::MixedFields);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field, self.nvars);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field, self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to x_i (0-based).
    pub fn partial_derivative(&self, i: usize) -> Result<Poly> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        Ok(self.derivative(i))
    }

    pub(crate) fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c.scale(&int(e as i64)));
        }
        out
    }

    /// Divides by the graded-lex leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Multivariate division by a single divisor under graded-lex order.
    pub fn div_rem(&self, q: &Poly) -> Result<(Poly, Poly)> {
        self.compatible(q)?;
        let Some((lm, lc)) = q.leading_term() else {
            return Err(Error::DivisionByZero);
        };
        let lc_inv = lc.inverse()?;
        let mut quotient = Poly::zero(&self.field, self.nvars);
        let mut remainder = Poly::zero(&self.field, self.nvars);
        let mut r = self.clone();
        while let Some((m, c)) = r.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(lm) {
                Some(shift) => {
                    let f = &c * &lc_inv;
                    let t = Poly::monomial(f.clone(), shift.clone());
                    r = r.sub(&q.mul(&t));
                    quotient.add_term(shift, f);
                }
                None => {
                    r.terms.remove(&m);
                    remainder.add_term(m, c);
                }
            }
        }
        Ok((quotient, remainder))
    }

    /// `Some(self / q)` when the division is exact.
    pub fn exact_div(&self, q: &Poly) -> Option<Poly> {
        if let Some(c) = q.as_constant() {
            return c.inverse().ok().map(|inv| self.scale(&inv));
        }
        if q.is_monomial() {
            let (lm, lc) = q.leading_term().unwrap();
            let inv = lc.inverse().ok()?;
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(lm)?, c * &inv);
            }
            return Some(Poly {
                field: self.field.clone(),
                nvars: self.nvars,
                terms,
            });
        }
        for v in 0..self.nvars {
            if q.degree_in(v) > self.degree_in(v) && !self.is_zero() {
                return None;
            }
        }
        let (quo, rem) = self.div_rem(q).ok()?;
        rem.is_zero().then_some(quo)
    }

    pub fn divides(&self, p: &Poly) -> bool {
        p.exact_div(self).is_some()
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Coefficients as a polynomial in x_v: entry k multiplies x_v^k.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(&self.field, self.nvars); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out[k].terms.insert(m2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(field: &Arc<NumberField>, nvars: usize, v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(field, nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m2 = m.clone();
                m2.0[v] += k as u32;
                out.add_term(m2, a.clone());
            }
        }
        out
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of the terms of minimal total degree.
    pub fn initial_part(&self) -> Result<Poly> {
        let nu = self.order().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(nu))
    }

    /// Terms of total degree strictly below `order`.
    pub fn truncate(&self, order: u32) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Composition: x_i is replaced by `assign[i]` where given.
    pub fn compose(&self, assign: &[Option<Poly>]) -> Poly {
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut kept = Monomial::one(self.nvars);
            let mut term = Poly::constant(c.clone(), self.nvars);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match assign.get(i).and_then(|a| a.as_ref()) {
                    Some(a) => {
                        let pw = cache.entry((i, e)).or_insert_with(|| a.pow(e));
                        term = term.mul(pw);
                    }
                    None => kept.0[i] = e,
                }
            }
            out = out.add(&term.mul_monomial(&kept));
        }
        out
    }

    /// Sets x_i = 0 for every i in `vars`.
    pub fn restrict_zero(&self, vars: &[usize]) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.0[v] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluation at a point of K^n.
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident) => {
        impl std::ops::$tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                Poly::$method(self, rhs)
            }
        }
    };
}

poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

pub(crate) fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c.as_rational() {
                Some(q) => (q.is_negative(), Some(q.abs())),
                None => (false, None),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match mag {
                Some(q) => {
                    if m.is_one() {
                        write!(f, "{}", q)?;
                    } else {
                        if !q.is_one() {
                            write!(f, "{}*", q)?;
                        }
                        write_monomial(f, m)?;
                    }
                }
                None => {
                    write!(f, "({})", c)?;
                    if !m.is_one() {
                        write!(f, "*")?;
                        write_monomial(f, m)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn x(i: usize) -> Poly {
        Poly::var(&q(), 3, i)
    }

    fn c(n: i64) -> Poly {
        Poly::from_int(&q(), 3, n)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x(0) + &x(1)) * &(&x(0) - &x(1));
        assert_eq!(p, &x(0).pow(2) - &x(1).pow(2));
        assert_eq!(&p + &Poly::zero(&q(), 3), p);
    }

    #[test]
    fn trinomial_square() {
        let s = &(&x(0) + &x(1)) + &x(2);
        let sq = s.pow(2);
        assert_eq!(sq.num_terms(), 6);
        let cross = sq.coefficient(&Monomial::from_exponents(vec![1, 1, 0]));
        assert_eq!(cross, FieldElement::from_int(&q(), 2));
    }

    #[test]
    fn partial_derivatives() {
        let p = &x(0).pow(2) * &x(2);
        assert_eq!(p.partial_derivative(0).unwrap(), &c(2) * &(&x(0) * &x(2)));
        assert!(c(7).partial_derivative(1).unwrap().is_zero());
        let r = &(&x(0) * &x(1)) + &x(1).pow(3);
        assert_eq!(r.partial_derivative(1).unwrap(), &x(0) + &(&c(3) * &x(1).pow(2)));
        assert!(matches!(r.partial_derivative(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn initial_part_and_truncate() {
        let p = &x(0).pow(2) + &x(2);
        assert_eq!(p.initial_part().unwrap(), x(2));
        let h = &(&x(0) * &x(1)) + &(&x(1) * &x(2));
        assert_eq!(h.initial_part().unwrap(), h);
        let r = &h + &x(0).pow(3);
        assert_eq!(r.initial_part().unwrap(), h);
        assert_eq!(Poly::zero(&q(), 3).initial_part(), Err(Error::ZeroPolynomial));

        assert_eq!((&x(0) + &x(0).pow(5)).truncate(3), x(0));
        assert!(r.truncate(0).is_zero());
        let s = &(&c(1) + &x(1)) + &x(1).pow(2);
        assert_eq!(s.truncate(2), &c(1) + &x(1));
    }

    #[test]
    fn grlex_leading_term() {
        let p = &(&x(2).pow(2) + &x(0)) + &(&x(0) * &x(1));
        let (m, _) = p.leading_term().unwrap();
        assert_eq!(m.exponents(), &[1, 1, 0]);
    }

    #[test]
    fn exact_division() {
        let a = &x(0) + &x(1);
        let b = &x(1) - &x(2);
        let p = &a * &b;
        assert_eq!(p.exact_div(&a), Some(b.clone()));
        assert_eq!(p.exact_div(&x(0)), None);
        assert_eq!((&p * &x(0)).exact_div(&x(0)), Some(p.clone()));
    }

    #[test]
    fn compose_and_display() {
        let p = &x(0).pow(2) + &x(1);
        let sub = p.compose(&[None, Some(&x(0) * &x(1)), None]);
        assert_eq!(sub, &x(0).pow(2) + &(&x(0) * &x(1)));
        assert_eq!(sub.to_string(), "x1^2 + x1*x2");
        assert_eq!((&c(-2) * &x(2)).to_string(), "-2*x3");
    }

    #[test]
    fn mixed_arity_rejected() {
        let a = Poly::var(&q(), 2, 0);
        assert!(matches!(
            poly_arith(&a, &x(0), PolyOp::Add),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
