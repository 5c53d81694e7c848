//! Multivariate GCD by recursive content / primitive-part reduction and
//! primitive polynomial remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::poly::{Monomial, Poly};
use crate::scalars::{FieldElement, Rational};

/// Greatest common divisor, normalized to graded-lex leading coefficient 1.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Result<Poly> {
    p.compatible(q)?;
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(gcd_inner(p, q))
}

/// Least common multiple, monic.
pub fn poly_lcm(p: &Poly, q: &Poly) -> Result<Poly> {
    let g = poly_gcd(p, q)?;
    let prod = p.mul(q);
    Ok(prod.exact_div(&g).expect("gcd divides the product").monic())
}

pub(crate) fn gcd_inner(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let one = Poly::one(p.field(), p.nvars());
    if p.is_constant() || q.is_constant() {
        return one;
    }
    if p == q {
        return p.monic();
    }
    // split off monomial contents: x_i is prime and coprime to the remaining factors
    let mp = p.monomial_content();
    let mq = q.monomial_content();
    let mono = Poly::monomial(FieldElement::one(p.field()), mp.gcd(&mq));
    if p.is_monomial() || q.is_monomial() {
        return mono;
    }
    let pr = if mp.is_one() { p.clone() } else { p.exact_div(&Poly::monomial(FieldElement::one(p.field()), mp)).unwrap() };
    let qr = if mq.is_one() { q.clone() } else { q.exact_div(&Poly::monomial(FieldElement::one(q.field()), mq)).unwrap() };
    mono.mul(&gcd_no_monomial(&pr, &qr)).monic()
}

fn gcd_no_monomial(p: &Poly, q: &Poly) -> Poly {
    let one = Poly::one(p.field(), p.nvars());
    if p.is_constant() || q.is_constant() {
        return one;
    }
    // cheap divisibility shortcuts
    if q.total_degree() <= p.total_degree() && q.divides(p) {
        return q.monic();
    }
    if p.total_degree() <= q.total_degree() && p.divides(q) {
        return p.monic();
    }
    let n = p.nvars();
    // a variable in which the gcd may have positive degree; if none, it is a unit
    let Some(v) = (0..n).rev().find(|&c| match (p.uses_var(c), q.uses_var(c)) {
        (true, true) => gcd_degree_bound(p, q, c) > 0,
        (false, false) => false,
        _ => true,
    }) else {
        return one;
    };
    match (p.uses_var(v), q.uses_var(v)) {
        (true, false) => return gcd_inner(&content_in(p, v), q),
        (false, true) => return gcd_inner(p, &content_in(q, v)),
        _ => {}
    }
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let c = gcd_inner(&cp, &cq);
    let mut a = scalar_primitive(&p.exact_div(&cp).expect("content divides"));
    let mut b = scalar_primitive(&q.exact_div(&cq).expect("content divides"));
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    // subresultant remainder sequence: exact divisions keep coefficients small
    let mut g = Poly::one(p.field(), n);
    let mut h = Poly::one(p.field(), n);
    let g_final = loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            break b;
        }
        if r.degree_in(v) == 0 {
            break one.clone();
        }
        let divisor = g.mul(&h.pow(delta));
        a = b;
        b = r.exact_div(&divisor).expect("subresultant division is exact");
        g = leading_coeff_in(&a, v);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    };
    let g = g_final;
    c.mul(&primitive_part_in(&g, v)).monic()
}

/// Upper bound for deg_v gcd(p, q): the degree of the univariate gcd after
/// specializing the other variables at a point where both leading
/// coefficients in x_v survive. Falls back to min degree if no point is found.
fn gcd_degree_bound(p: &Poly, q: &Poly, v: usize) -> u32 {
    let fallback = p.degree_in(v).min(q.degree_in(v));
    let field = p.field();
    for attempt in 0..4i64 {
        let point: Vec<FieldElement> = (0..p.nvars())
            .map(|i| FieldElement::from_int(field, 2 + ((i as i64 * 7 + attempt * 13) % 29)))
            .collect();
        let a = specialize(p, v, &point);
        let b = specialize(q, v, &point);
        if a.len() as u32 != p.degree_in(v) + 1 || b.len() as u32 != q.degree_in(v) + 1 {
            continue;
        }
        return univariate_gcd_degree(a, b);
    }
    fallback
}

/// Coefficients in x_v (constant first) with every other variable evaluated; trimmed.
fn specialize(p: &Poly, v: usize, point: &[FieldElement]) -> Vec<FieldElement> {
    let field = p.field();
    let mut out = vec![FieldElement::zero(field); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            if i != v && e > 0 {
                t = &t * &point[i].pow(e);
            }
        }
        let slot = m.exponents()[v] as usize;
        out[slot] = &out[slot] + &t;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn univariate_gcd_degree(mut a: Vec<FieldElement>, mut b: Vec<FieldElement>) -> u32 {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a <- a mod b
        let lb = b.last().unwrap().inverse().expect("trimmed");
        while a.len() >= b.len() {
            let f = &a[a.len() - 1] * &lb;
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[shift + j] = &a[shift + j] - &(&f * bj);
            }
            a.pop();
            while a.last().is_some_and(|c| c.is_zero()) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1) as u32
}

/// Rescales by a rational so that all coordinates are coprime integers. Keeps
/// the remainder sequence free of scalar growth.
fn scalar_primitive(p: &Poly) -> Poly {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        for r in c.coords() {
            if !r.is_zero() {
                num = num.gcd(r.numer());
                den = den.lcm(r.denom());
            }
        }
    }
    if num.is_zero() || (num.is_one() && den.is_one()) {
        return p.clone();
    }
    p.scale(&FieldElement::from_rational(p.field(), Rational::new(den, num)))
}

/// GCD of the coefficients of p viewed as a polynomial in x_v.
pub fn content_in(p: &Poly, v: usize) -> Poly {
    let coeffs = p.coeffs_in(v);
    let mut g = Poly::zero(p.field(), p.nvars());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd_inner(&g, c);
        if g.is_constant() {
            return Poly::one(p.field(), p.nvars());
        }
    }
    g
}

pub fn primitive_part_in(p: &Poly, v: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides")
}

fn leading_coeff_in(p: &Poly, v: usize) -> Poly {
    p.coeffs_in(v).swap_remove(p.degree_in(v) as usize)
}

/// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b with respect to x_v;
/// b must involve x_v.
pub fn pseudo_remainder(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    assert!(db > 0, "pseudo-remainder divisor must involve the main variable");
    let da = a.degree_in(v);
    if da < db {
        return a.clone();
    }
    let lb = leading_coeff_in(b, v);
    let mut r = a.clone();
    let mut steps = 0;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = leading_coeff_in(&r, v);
        let mut e = vec![0; a.nvars()];
        e[v] = dr - db;
        let shift = Monomial::from_exponents(e);
        r = lb.mul(&r).sub(&lr.mul(&b.mul_monomial(&shift)));
        steps += 1;
    }
    let missing = da - db + 1 - steps;
    if missing > 0 && !r.is_zero() {
        r = r.mul(&lb.pow(missing));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::NumberField;

    fn x(i: usize) -> Poly {
        Poly::var(&NumberField::rationals(), 3, i)
    }

    #[test]
    fn monomial_gcds() {
        assert_eq!(poly_gcd(&(&x(0) * &x(1)), &(&x(0) * &x(2))).unwrap(), x(0));
        assert!(poly_gcd(&x(0), &x(1)).unwrap().is_one());
    }

    #[test]
    fn prs_gcd() {
        let s = &x(0) + &x(1);
        let p = &s.pow(2) * &x(2);
        let q = &s * &x(2).pow(2);
        assert_eq!(poly_gcd(&p, &q).unwrap(), (&s * &x(2)).monic());
    }

    #[test]
    fn gcd_with_shared_nonmonomial_factor() {
        let g = &(&x(0) * &x(1)) + &(&x(2).pow(2) + &Poly::from_int(&NumberField::rationals(), 3, 1));
        let a = &g * &(&x(0) - &x(2));
        let b = &g * &(&x(1).pow(2) + &x(0));
        assert_eq!(poly_gcd(&a, &b).unwrap(), g.monic());
        let l = poly_lcm(&a, &b).unwrap();
        assert!(a.divides(&l) && b.divides(&l));
    }

    #[test]
    fn gcd_of_zero_pair_is_error() {
        let z = Poly::zero(&NumberField::rationals(), 3);
        assert_eq!(poly_gcd(&z, &z), Err(Error::ZeroPolynomial));
        assert_eq!(poly_gcd(&z, &x(1)).unwrap(), x(1));
    }
}
