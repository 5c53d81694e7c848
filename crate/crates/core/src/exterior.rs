//! Differential forms and vector fields with rational-function coefficients.
//!
//! A k-form is stored as a sparse map from strictly increasing index sets
//! (0-based) to nonzero coefficients. Wedge products past the top degree
//! are the zero form of that degree, not an error.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyalg::{poly_gcd, Poly, RatFunc};
use crate::scalars::{FieldElement, NumberField};

pub type IndexSet = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeroForm {
    field: Arc<NumberField>,
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<IndexSet, RatFunc>,
}

impl MeroForm {
    pub fn zero(field: &Arc<NumberField>, nvars: usize, degree: usize) -> Self {
        MeroForm {
            field: field.clone(),
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A function viewed as a 0-form.
    pub fn function(f: RatFunc) -> Self {
        let mut out = Self::zero(f.field(), f.nvars(), 0);
        if !f.is_zero() {
            out.coeffs.insert(vec![], f);
        }
        out
    }

    /// The basic 1-form dx_i.
    pub fn dx(field: &Arc<NumberField>, nvars: usize, i: usize) -> Self {
        let mut out = Self::zero(field, nvars, 1);
        out.coeffs.insert(vec![i], RatFunc::one(field, nvars));
        out
    }

    /// Volume form dx_1 ^ ... ^ dx_n.
    pub fn volume(field: &Arc<NumberField>, nvars: usize) -> Self {
        let mut out = Self::zero(field, nvars, nvars);
        out.coeffs.insert((0..nvars).collect(), RatFunc::one(field, nvars));
        out
    }

    /// sum_i a_i dx_i.
    pub fn one_form(components: Vec<RatFunc>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        };
        let (field, nvars) = (first.field().clone(), first.nvars());
        if components.len() != nvars {
            return Err(Error::ArityMismatch {
                expected: nvars,
                found: components.len(),
            });
        }
        for c in &components {
            first.compatible(c)?;
        }
        let mut out = Self::zero(&field, nvars, 1);
        for (i, c) in components.into_iter().enumerate() {
            if !c.is_zero() {
                out.coeffs.insert(vec![i], c);
            }
        }
        Ok(out)
    }

    pub fn one_form_poly(components: Vec<Poly>) -> Result<Self> {
        Self::one_form(components.into_iter().map(RatFunc::from_poly).collect())
    }

    /// Builds a k-form from (index set, coefficient) pairs. Index sets need not
    /// be sorted; repeated indices give zero.
    pub fn from_terms(
        field: &Arc<NumberField>,
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (IndexSet, RatFunc)>,
    ) -> Result<Self> {
        let mut out = Self::zero(field, nvars, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::WrongDegree {
                    expected: degree,
                    found: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= nvars) {
                return Err(Error::IndexOutOfRange { index: bad, nvars });
            }
            if let Some((sorted, sign)) = sort_with_sign(&idx) {
                let c = if sign < 0 { c.neg() } else { c };
                out.add_coeff(sorted, c);
            }
        }
        Ok(out)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> RatFunc {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&self.field, self.nvars))
    }

    /// Components a_i of a 1-form sum_i a_i dx_i.
    pub fn components(&self) -> Vec<RatFunc> {
        (0..self.nvars).map(|i| self.coefficient(&[i])).collect()
    }

    /// The function of a 0-form.
    pub fn as_function(&self) -> Option<RatFunc> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.values().all(|c| c.is_polynomial())
    }

    /// Polynomial coefficients, or `NotPolynomial`.
    pub fn poly_coeffs(&self) -> Result<Vec<(IndexSet, Poly)>> {
        self.coeffs
            .iter()
            .map(|(k, c)| c.as_poly().cloned().map(|p| (k.clone(), p)).ok_or(Error::NotPolynomial))
            .collect()
    }

    fn compatible(&self, other: &MeroForm) -> Result<()> {
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

    fn add_coeff(&mut self, idx: IndexSet, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&idx) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.coeffs.remove(&idx);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    pub fn checked_add(&self, other: &MeroForm) -> Result<MeroForm> {
        self.compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::WrongDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_coeff(k.clone(), c.clone());
        }
        Ok(out)
    }

    /// Panics on degree or arity mismatch; see [`MeroForm::checked_add`].
    pub fn add(&self, other: &MeroForm) -> MeroForm {
        self.checked_add(other).expect("form addition")
    }

    pub fn neg(&self) -> MeroForm {
        MeroForm {
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &MeroForm) -> MeroForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &RatFunc) -> MeroForm {
        if f.is_zero() {
            return Self::zero(&self.field, self.nvars, self.degree);
        }
        MeroForm {
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.mul(f))).collect(),
            ..self.clone()
        }
    }

    pub fn scale_poly(&self, p: &Poly) -> MeroForm {
        self.scale(&RatFunc::from_poly(p.clone()))
    }

    pub fn scale_const(&self, c: &FieldElement) -> MeroForm {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars, self.degree);
        }
        MeroForm {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect(),
            ..self.clone()
        }
    }

    /// Divides every coefficient by a nonzero polynomial.
    pub fn div_poly(&self, p: &Poly) -> Result<MeroForm> {
        let inv = RatFunc::from_poly(p.clone()).inverse()?;
        Ok(self.scale(&inv))
    }

    pub fn wedge(&self, other: &MeroForm) -> Result<MeroForm> {
        wedge(self, other)
    }

    pub fn d(&self) -> MeroForm {
        ext_derivative(self)
    }
}

/// Sorts an index list, returning the permutation sign, or `None` on a repeat.
fn sort_with_sign(idx: &[usize]) -> Option<(IndexSet, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    // insertion sort counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Merges disjoint sorted index sets; sign is the parity of the merge permutation.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(IndexSet, i32)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut v: IndexSet = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    Some((v, if inversions % 2 == 0 { 1 } else { -1 }))
}

pub fn wedge(u: &MeroForm, v: &MeroForm) -> Result<MeroForm> {
    u.compatible(v)?;
    let degree = u.degree + v.degree;
    let mut out = MeroForm::zero(&u.field, u.nvars, degree);
    if degree > u.nvars {
        return Ok(out);
    }
    for (a, f) in &u.coeffs {
        for (b, g) in &v.coeffs {
            if let Some((idx, sign)) = merge_sign(a, b) {
                let c = f.mul(g);
                out.add_coeff(idx, if sign < 0 { c.neg() } else { c });
            }
        }
    }
    Ok(out)
}

/// Exterior derivative; coefficients are differentiated with the quotient rule.
pub fn ext_derivative(u: &MeroForm) -> MeroForm {
    let mut out = MeroForm::zero(&u.field, u.nvars, u.degree + 1);
    if u.degree >= u.nvars {
        return out;
    }
    for (idx, f) in &u.coeffs {
        for j in 0..u.nvars {
            if idx.contains(&j) {
                continue;
            }
            let df = f.derivative(j);
            if df.is_zero() {
                continue;
            }
            if let Some((merged, sign)) = merge_sign(&[j], idx) {
                out.add_coeff(merged, if sign < 0 { df.neg() } else { df });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    field: Arc<NumberField>,
    nvars: usize,
    components: Vec<RatFunc>,
}

impl VectorField {
    pub fn new(components: Vec<RatFunc>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        };
        let (field, nvars) = (first.field().clone(), first.nvars());
        if components.len() != nvars {
            return Err(Error::ArityMismatch {
                expected: nvars,
                found: components.len(),
            });
        }
        for c in &components {
            first.compatible(c)?;
        }
        Ok(VectorField {
            field,
            nvars,
            components,
        })
    }

    pub fn from_polys(components: Vec<Poly>) -> Result<Self> {
        Self::new(components.into_iter().map(RatFunc::from_poly).collect())
    }

    /// sum_i alpha_i x_i d/dx_i.
    pub fn diagonal(alphas: &[FieldElement]) -> Result<Self> {
        let Some(first) = alphas.first() else {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        };
        let field = first.field().clone();
        let n = alphas.len();
        Self::from_polys(
            alphas
                .iter()
                .enumerate()
                .map(|(i, a)| Poly::var(&field, n, i).scale(a))
                .collect(),
        )
    }

    pub fn radial(field: &Arc<NumberField>, nvars: usize) -> Self {
        VectorField {
            field: field.clone(),
            nvars,
            components: (0..nvars).map(|i| RatFunc::var(field, nvars, i)).collect(),
        }
    }

    /// The coordinate field d/dx_i.
    pub fn coordinate(field: &Arc<NumberField>, nvars: usize, i: usize) -> Self {
        let components = (0..nvars)
            .map(|j| {
                if i == j {
                    RatFunc::one(field, nvars)
                } else {
                    RatFunc::zero(field, nvars)
                }
            })
            .collect();
        VectorField {
            field: field.clone(),
            nvars,
            components,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn poly_components(&self) -> Result<Vec<Poly>> {
        self.components
            .iter()
            .map(|c| c.as_poly().cloned().ok_or(Error::NotPolynomial))
            .collect()
    }

    pub fn scale(&self, f: &RatFunc) -> VectorField {
        VectorField {
            components: self.components.iter().map(|c| c.mul(f)).collect(),
            ..self.clone()
        }
    }

    /// The derivation X(f).
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero(&self.field, self.nvars);
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let df = f.derivative(i);
            if !df.is_zero() {
                acc = acc.add(&c.mul(&df));
            }
        }
        acc
    }

    /// X(p) for polynomial data, staying in the polynomial ring.
    pub fn apply_poly(&self, p: &Poly) -> Result<Poly> {
        let comps = self.poly_components()?;
        let mut acc = Poly::zero(&self.field, self.nvars);
        for (i, c) in comps.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&p.derivative(i)));
            }
        }
        Ok(acc)
    }
}

/// Contraction i_X u with alternating signs.
pub fn interior_product(x: &VectorField, u: &MeroForm) -> Result<MeroForm> {
    if u.degree == 0 {
        return Err(Error::DegreeZero);
    }
    if x.nvars != u.nvars {
        return Err(Error::ArityMismatch {
            expected: u.nvars,
            found: x.nvars,
        });
    }
    if !NumberField::same(&x.field, &u.field) {
        return Err(Error::MixedFields);
    }
    let mut out = MeroForm::zero(&u.field, u.nvars, u.degree - 1);
    for (idx, f) in &u.coeffs {
        for (r, &i) in idx.iter().enumerate() {
            let xi = &x.components[i];
            if xi.is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(r);
            let c = xi.mul(f);
            out.add_coeff(rest, if r % 2 == 1 { c.neg() } else { c });
        }
    }
    Ok(out)
}

pub fn is_tangent(x: &VectorField, w: &MeroForm) -> Result<bool> {
    if w.degree != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            found: w.degree,
        });
    }
    Ok(interior_product(x, w)?.is_zero())
}

/// Frobenius integrability w ^ dw = 0.
pub fn is_integrable(w: &MeroForm) -> bool {
    wedge(w, &ext_derivative(w)).map(|f| f.is_zero()).unwrap_or(false)
}

/// Divides a polynomial 1-form by the gcd g of its coefficients; returns (w/g, g).
pub fn remove_codim1(w: &MeroForm) -> Result<(MeroForm, Poly)> {
    let coeffs = w.poly_coeffs()?;
    if coeffs.is_empty() {
        return Err(Error::ZeroForm);
    }
    let g = coeffs
        .iter()
        .try_fold(Poly::zero(&w.field, w.nvars), |g, (_, c)| poly_gcd(&g, c))?;
    let mut out = MeroForm::zero(&w.field, w.nvars, w.degree);
    for (k, c) in coeffs {
        out.coeffs
            .insert(k, RatFunc::from_poly(c.exact_div(&g).expect("gcd divides")));
    }
    Ok((out, g))
}

pub fn directional_derivative(x: &VectorField, f: &RatFunc) -> Result<RatFunc> {
    if x.nvars != f.nvars() {
        return Err(Error::ArityMismatch {
            expected: f.nvars(),
            found: x.nvars,
        });
    }
    Ok(x.apply(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstIntegralVerdict {
    pub holds: bool,
    /// The candidate is constant, so `holds` carries no information.
    pub degenerate: bool,
}

pub fn is_first_integral(x: &VectorField, f: &RatFunc) -> Result<FirstIntegralVerdict> {
    Ok(FirstIntegralVerdict {
        holds: directional_derivative(x, f)?.is_zero(),
        degenerate: f.is_constant(),
    })
}

/// Renders a coefficient so that `coef*rest` parses back unambiguously.
fn coefficient_term(c: &RatFunc) -> (bool, String) {
    let s = c.to_string();
    let single = c.is_polynomial() && c.num().num_terms() == 1 && !s.contains('(');
    if single {
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else {
        (false, format!("({})", s))
    }
}

impl fmt::Display for MeroForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            let basis: Vec<String> = idx.iter().map(|i| format!("d(x{})", i + 1)).collect();
            let basis = basis.join("^^");
            let (neg, body) = coefficient_term(c);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if basis.is_empty() {
                write!(f, "{}", body)?;
            } else if body == "1" {
                write!(f, "{}", basis)?;
            } else {
                write!(f, "{}*{}", body, basis)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "vf({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn x(i: usize) -> RatFunc {
        RatFunc::var(&q(), 3, i)
    }

    fn dx(i: usize) -> MeroForm {
        MeroForm::dx(&q(), 3, i)
    }

    fn k(n: i64) -> FieldElement {
        FieldElement::from_int(&q(), n)
    }

    #[test]
    fn wedge_signs() {
        let w = wedge(&dx(0), &dx(1)).unwrap();
        assert_eq!(w.coefficient(&[0, 1]), RatFunc::one(&q(), 3));
        assert!(wedge(&dx(0), &dx(0)).unwrap().is_zero());
        let a = dx(0).scale(&x(1));
        assert!(wedge(&a, &w).unwrap().is_zero());
        let vol = wedge(&dx(2), &w).unwrap();
        assert_eq!(vol, MeroForm::volume(&q(), 3));
    }

    #[test]
    fn wedge_past_top_degree_is_zero_form() {
        let w = wedge(&MeroForm::volume(&q(), 3), &dx(0)).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 4);
    }

    #[test]
    fn exterior_derivative_examples() {
        let w = dx(0).scale(&x(1));
        assert_eq!(ext_derivative(&w), wedge(&dx(1), &dx(0)).unwrap());
        let log = dx(1).scale(&x(1).inverse().unwrap());
        assert!(ext_derivative(&log).is_zero());
    }

    #[test]
    fn interior_examples() {
        let f = &q();
        let a = RatFunc::from_poly(Poly::var(f, 3, 0).pow(2));
        let b = x(2);
        let c = RatFunc::one(f, 3);
        let xf = VectorField::new(vec![a.clone(), b, c]).unwrap();
        assert_eq!(interior_product(&xf, &dx(0)).unwrap().as_function().unwrap(), a);

        let r = VectorField::radial(f, 3);
        let two = wedge(&dx(1), &dx(2)).unwrap();
        let expect = dx(2).scale(&x(1)).sub(&dx(1).scale(&x(2)));
        assert_eq!(interior_product(&r, &two).unwrap(), expect);
        assert_eq!(interior_product(&r, &MeroForm::function(x(0))), Err(Error::DegreeZero));
    }

    #[test]
    fn tangency_examples() {
        let d1 = VectorField::coordinate(&q(), 3, 0);
        assert!(is_tangent(&d1, &dx(1)).unwrap());
        assert!(!is_tangent(&d1, &dx(0)).unwrap());
        let diag = VectorField::diagonal(&[k(1), k(2), k(3)]).unwrap();
        let w = MeroForm::one_form(vec![
            x(1).mul(&x(2)),
            x(0).mul(&x(2)),
            x(0).mul(&x(1)).neg(),
        ])
        .unwrap();
        assert!(is_tangent(&diag, &w).unwrap());
    }

    #[test]
    fn integrability_examples() {
        assert!(is_integrable(&dx(0)));
        assert!(is_integrable(&dx(0).scale(&x(1)).sub(&dx(1).scale(&x(0)))));
        let w = dx(0).scale(&x(1)).add(&dx(2));
        assert!(!is_integrable(&w));
        let expected = MeroForm::volume(&q(), 3).neg();
        assert_eq!(wedge(&w, &w.d()).unwrap(), expected);
    }

    #[test]
    fn codim1_removal() {
        let base = dx(0).add(&dx(1));
        let (w, g) = remove_codim1(&base.scale(&x(0))).unwrap();
        assert_eq!((w, g), (base.clone(), Poly::var(&q(), 3, 0)));
        let (w, g) = remove_codim1(&base).unwrap();
        assert!(g.is_one());
        assert_eq!(w, base);
        let v = dx(0).scale(&x(0).mul(&x(1))).add(&dx(1).scale(&x(0).mul(&x(0))));
        let (w, g) = remove_codim1(&v).unwrap();
        assert_eq!(w, dx(0).scale(&x(1)).add(&dx(1).scale(&x(0))));
        assert_eq!(g, Poly::var(&q(), 3, 0));
        assert_eq!(remove_codim1(&MeroForm::zero(&q(), 3, 1)), Err(Error::ZeroForm));
    }

    #[test]
    fn directional_derivative_examples() {
        let euler = VectorField::diagonal(&[k(1), k(1), k(-2)]).unwrap();
        let f = x(0).mul(&x(1)).mul(&x(2));
        assert!(directional_derivative(&euler, &f).unwrap().is_zero());
        let alpha = VectorField::diagonal(&[k(3), k(7), k(1)]).unwrap();
        let ratio = x(0).div(&x(1)).unwrap();
        assert_eq!(directional_derivative(&alpha, &ratio).unwrap(), ratio.scale(&k(-4)));
        let c = RatFunc::constant(k(5), 3);
        assert!(directional_derivative(&alpha, &c).unwrap().is_zero());
    }

    #[test]
    fn first_integral_examples() {
        let x1 = VectorField::diagonal(&[k(1), k(1), k(-2)]).unwrap();
        assert!(is_first_integral(&x1, &x(0).mul(&x(1)).mul(&x(2))).unwrap().holds);
        let x2 = VectorField::diagonal(&[k(1), k(1), k(5)]).unwrap();
        assert!(is_first_integral(&x2, &x(0).div(&x(1)).unwrap()).unwrap().holds);
        let x3 = VectorField::diagonal(&[k(1), k(2), k(3)]).unwrap();
        assert!(!is_first_integral(&x3, &x(0)).unwrap().holds);
        let v = is_first_integral(&x3, &RatFunc::one(&q(), 3)).unwrap();
        assert!(v.holds && v.degenerate);
    }

    #[test]
    fn display_round_shape() {
        let w = dx(0).scale(&x(1)).sub(&dx(1).scale(&x(0)));
        assert_eq!(w.to_string(), "x2*d(x1) - x1*d(x2)");
        let two = wedge(&dx(0), &dx(1)).unwrap().scale(&x(2).add(&x(0)));
        assert_eq!(two.to_string(), "(x1 + x3)*d(x1)^^d(x2)");
    }
}
