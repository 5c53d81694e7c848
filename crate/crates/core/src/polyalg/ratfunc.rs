use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{FieldElement, NumberField};

use super::gcd::gcd_inner;
use super::poly::Poly;

/// Quotient num/den in lowest terms with a monic (graded-lex) denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.compatible(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            let one = Poly::one(den.field(), den.nvars());
            return RatFunc { num, den: one };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd_inner(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
            }
        };
        let lc = den.leading_coefficient().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inverse().expect("nonzero");
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field(), p.nvars());
        RatFunc { num: p, den }
    }

    pub fn zero(field: &Arc<NumberField>, nvars: usize) -> Self {
        Self::from_poly(Poly::zero(field, nvars))
    }

    pub fn one(field: &Arc<NumberField>, nvars: usize) -> Self {
        Self::from_poly(Poly::one(field, nvars))
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Self {
        Self::from_poly(Poly::constant(c, nvars))
    }

    pub fn var(field: &Arc<NumberField>, nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(field, nvars, i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.num.field()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Constant in the exact sense: num and den of total degree 0.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    pub fn compatible(&self, other: &RatFunc) -> Result<()> {
        self.num.compatible(&other.num)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        // a/b + c/d in lowest terms: with g = gcd(b, d) only factors of g can cancel
        if self.den.is_one() {
            let num = self.num.mul(&other.den).add(&other.num);
            return RatFunc::raw(num, other.den.clone());
        }
        if other.den.is_one() {
            let num = self.num.add(&other.num.mul(&self.den));
            return RatFunc::raw(num, self.den.clone());
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        let g = gcd_inner(&self.den, &other.den);
        let a = self.den.exact_div(&g).unwrap();
        let b = other.den.exact_div(&g).unwrap();
        let num = self.num.mul(&b).add(&other.num.mul(&a));
        let den = a.mul(&other.den);
        if g.is_one() {
            return RatFunc::raw(num, den);
        }
        let h = gcd_inner(&num, &g);
        if h.is_one() {
            RatFunc::raw(num, den)
        } else {
            RatFunc::raw(num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
        }
    }

    /// Assumes num/den is already reduced; only fixes the unit.
    fn raw(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero(den.field(), den.nvars());
        }
        let lc = den.leading_coefficient().unwrap();
        if lc.is_one() {
            return RatFunc { num, den };
        }
        let inv = lc.inverse().expect("nonzero");
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.field(), self.nvars());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        // inputs are reduced, so cross-cancellation leaves the product reduced
        let g1 = gcd_inner(&self.num, &other.den);
        let g2 = gcd_inner(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = other.den.exact_div(&g1).unwrap();
        let n2 = other.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coefficient().unwrap().inverse().unwrap();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    /// Tests self == a * b by cross-multiplying, without any gcd.
    pub fn equals_product(&self, a: &RatFunc, b: &RatFunc) -> bool {
        self.num.mul(&a.den).mul(&b.den) == a.num.mul(&b.num).mul(&self.den)
    }

    /// Tests whether the sum over `terms` of the product of each term's factors
    /// is zero, over the product of all denominators and without any gcd.
    pub fn sum_of_products_vanishes(terms: &[Vec<&RatFunc>]) -> bool {
        let parts: Vec<(Poly, Poly)> = terms
            .iter()
            .filter(|t| t.iter().all(|f| !f.is_zero()))
            .map(|t| {
                let mut num = t[0].num.clone();
                let mut den = t[0].den.clone();
                for f in &t[1..] {
                    num = num.mul(&f.num);
                    if !f.den.is_one() {
                        den = den.mul(&f.den);
                    }
                }
                (num, den)
            })
            .collect();
        let Some(first) = parts.first() else {
            return true;
        };
        // multiply through by the product of the distinct denominators
        let mut dens: Vec<&Poly> = Vec::new();
        for (_, d) in &parts {
            if !d.is_one() && !dens.contains(&d) {
                dens.push(d);
            }
        }
        let mut total = Poly::zero(first.0.field(), first.0.nvars());
        for (n, d) in &parts {
            let mut t = n.clone();
            for &e in &dens {
                if e != d {
                    t = t.mul(e);
                }
            }
            total = total.add(&t);
        }
        total.is_zero()
    }

    pub fn scale(&self, c: &FieldElement) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.field(), self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn inverse(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Quotient rule. With g = gcd(d, d'), (n/d)' = (n' d/g - n d'/g) / (d * d/g),
    /// and only factors of g can cancel from that quotient.
    pub fn partial_derivative(&self, i: usize) -> Result<RatFunc> {
        let dn = self.num.partial_derivative(i)?;
        if self.den.is_constant() {
            return Ok(RatFunc::from_poly(dn));
        }
        let dd = self.den.derivative(i);
        let g = gcd_inner(&self.den, &dd);
        let h = self.den.exact_div(&g).unwrap();
        let num = if dd.is_zero() {
            dn
        } else {
            dn.mul(&h).sub(&self.num.mul(&dd.exact_div(&g).unwrap()))
        };
        let den = self.den.mul(&h);
        if g.is_one() {
            return Ok(RatFunc::raw(num, den));
        }
        let c = gcd_inner(&num, &g);
        if c.is_one() {
            Ok(RatFunc::raw(num, den))
        } else {
            Ok(RatFunc::raw(num.exact_div(&c).unwrap(), den.exact_div(&c).unwrap()))
        }
    }

    pub(crate) fn derivative(&self, i: usize) -> RatFunc {
        self.partial_derivative(i).expect("index in range")
    }

    /// Composition with rational substitutions x_i -> assign[i].
    pub fn substitute(&self, assign: &[Option<RatFunc>]) -> Result<RatFunc> {
        let n = substitute(&self.num, assign)?;
        let d = substitute(&self.den, assign)?;
        n.div(&d)
    }
}

/// Exact composition of a polynomial with rational functions, normalized.
/// Each variable is substituted at most once; `assign` has one slot per variable.
pub fn substitute(p: &Poly, assign: &[Option<RatFunc>]) -> Result<RatFunc> {
    if assign.len() != p.nvars() {
        return Err(Error::ArityMismatch {
            expected: p.nvars(),
            found: assign.len(),
        });
    }
    for a in assign.iter().flatten() {
        a.compatible(&RatFunc::from_poly(p.clone()))?;
    }
    // common denominator per variable: x_i -> n_i/d_i, multiply through by prod d_i^{deg_i}
    let mut den_factor = Poly::one(p.field(), p.nvars());
    let mut cleared = Poly::zero(p.field(), p.nvars());
    let degs: Vec<u32> = (0..p.nvars()).map(|v| p.degree_in(v)).collect();
    for (m, c) in p.terms() {
        let mut term = Poly::constant(c.clone(), p.nvars());
        let mut kept = vec![0; p.nvars()];
        for (i, &e) in m.exponents().iter().enumerate() {
            match &assign[i] {
                Some(r) => {
                    term = term
                        .mul(&r.num().pow(e))
                        .mul(&r.den().pow(degs[i] - e));
                }
                None => kept[i] = e,
            }
        }
        cleared = cleared.add(&term.mul_monomial(&super::Monomial::from_exponents(kept)));
    }
    for (i, a) in assign.iter().enumerate() {
        if let Some(r) = a {
            den_factor = den_factor.mul(&r.den().pow(degs[i]));
        }
    }
    RatFunc::new(cleared, den_factor)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| p.num_terms() > 1 || p.as_constant().is_some_and(|c| c.as_rational().is_none());
        if wrap(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let (m, c) = self.den.leading_term().unwrap();
        let bare = self.den.is_monomial()
            && c.is_one()
            && m.exponents().iter().filter(|&&e| e > 0).count() == 1;
        if bare {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
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

    fn rf(n: Poly, d: Poly) -> RatFunc {
        RatFunc::new(n, d).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let blow = Some(RatFunc::from_poly(&x(0) * &x(1)));
        let r = substitute(&x(1), &[None, blow.clone(), None]).unwrap();
        assert_eq!(r, RatFunc::from_poly(&x(0) * &x(1)));

        let ratio = rf(x(1), x(0));
        let composed = ratio.substitute(&[None, blow, None]).unwrap();
        assert_eq!(composed, RatFunc::var(&q(), 3, 1));

        let p = &x(0).pow(2) + &x(1);
        let r = substitute(&p, &[None, Some(rf(x(2), x(0))), None]).unwrap();
        assert_eq!(r, rf(&x(0).pow(3) + &x(2), x(0)));
    }

    #[test]
    fn normalization_is_canonical() {
        let s = &x(0) + &x(2);
        let a = rf(x(1), &x(0) * &Poly::from_int(&q(), 3, 3));
        let b = rf(&x(1) * &s, &(&x(0) * &s) * &Poly::from_int(&q(), 3, 3));
        assert_eq!(a, b);
        assert!(a.den().leading_coefficient().unwrap().is_one());
    }

    #[test]
    fn quotient_rule() {
        let r = rf(x(0), x(1));
        let d = r.partial_derivative(1).unwrap();
        assert_eq!(d, rf(x(0).neg(), x(1).pow(2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatFunc::new(x(0), Poly::zero(&q(), 3)),
            Err(Error::DivisionByZero)
        );
    }
}
