//! Diagonal-field analysis in dimension three: tangent logarithmic pencils,
//! the two normal forms of a tangent integrable form, complex hyperbolic
//! checks, the Jouanolou example and invariant surface searches.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exterior::{interior_product, is_integrable, is_tangent, MeroForm, VectorField};
use crate::linalg::{self, Matrix};
use crate::pencil::Pencil;
use crate::polyalg::{Monomial, Poly};
use crate::resonance::{is_strongly_diagonalizable, nonneg_resonance_search, Eigenvalues, NonnegResonance};
use crate::scalars::{FieldElement, NumberField, Rational};

/// x_S dx_i / x_i patterns: (I) in two variables, (II) in three.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalForm {
    I,
    II,
}

impl NormalForm {
    pub fn name(&self) -> &'static str {
        match self {
            NormalForm::I => "I",
            NormalForm::II => "II",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSingularityReport {
    pub normal_form: Option<NormalForm>,
    /// 2 or 3 when matched.
    pub dimensional_type: Option<usize>,
    /// Variables carrying the residues, in increasing order.
    pub variables: Vec<usize>,
    pub residues: Vec<FieldElement>,
    /// The unit u with w = u * (normal form), truncated at `order`.
    pub unit: Option<Poly>,
    pub order: Option<u32>,
    /// Nonnegative resonance search on the residues.
    pub resonance: Option<NonnegResonance>,
    pub complex_hyperbolic: bool,
}

impl SimpleSingularityReport {
    fn unmatched(order: Option<u32>) -> Self {
        SimpleSingularityReport {
            normal_form: None,
            dimensional_type: None,
            variables: vec![],
            residues: vec![],
            unit: None,
            order,
            resonance: None,
            complex_hyperbolic: false,
        }
    }

    fn matched(variables: Vec<usize>, residues: Vec<FieldElement>, bound: u64) -> Result<Self> {
        let tau = variables.len();
        let resonance = nonneg_resonance_search(&Eigenvalues::new(residues.clone())?, bound)?;
        Ok(SimpleSingularityReport {
            normal_form: Some(if tau == 2 { NormalForm::I } else { NormalForm::II }),
            dimensional_type: Some(tau),
            variables,
            residues,
            unit: None,
            order: None,
            complex_hyperbolic: resonance.relation.is_none(),
            resonance: Some(resonance),
        })
    }
}

/// A tangent logarithmic pencil together with the residues of its generators.
#[derive(Clone, Debug)]
pub struct TangentLogPencil {
    pub pencil: Pencil,
    pub residues: [Vec<FieldElement>; 2],
}

/// b1 x2 x3 dx1 + b2 x1 x3 dx2 + b3 x1 x2 dx3, zero residues dropping out.
pub fn cleared_log_form(field: &Arc<NumberField>, residues: &[FieldElement]) -> Result<MeroForm> {
    let n = residues.len();
    let comps = (0..n)
        .map(|i| {
            let m = (0..n).filter(|&j| j != i).fold(Poly::one(field, n), |acc, j| acc.mul(&Poly::var(field, n, j)));
            m.scale(&residues[i])
        })
        .collect();
    MeroForm::one_form_poly(comps)
}

fn dependent(u: &[FieldElement], v: &[FieldElement]) -> bool {
    (0..u.len()).all(|i| (i + 1..u.len()).all(|j| (&u[i] * &v[j] - &u[j] * &v[i]).is_zero()))
}

/// Residue vectors spanning { b : sum b_i a_i = 0 }, preferring ones without zero entries.
fn residue_basis(a: &[FieldElement]) -> [Vec<FieldElement>; 2] {
    let [a1, a2, a3] = [&a[0], &a[1], &a[2]];
    let f = a1.field();
    let two = FieldElement::from_int(f, 2);
    let inv = |x: &FieldElement| x.inverse().expect("nonzero eigenvalue");
    let mut candidates = vec![
        vec![a2 - a3, a3 - a1, a1 - a2],
        vec![inv(a1), inv(a2), -&(&two * &inv(a3))],
        vec![inv(a1), -&(&two * &inv(a2)), inv(a3)],
        vec![-&(&two * &inv(a1)), inv(a2), inv(a3)],
    ];
    let m = vec![a.to_vec()];
    candidates.extend(linalg::kernel(&m, 3, f));
    let full = |v: &Vec<FieldElement>| v.iter().all(|x| !x.is_zero());
    candidates.sort_by_key(|v| !full(v));
    let mut chosen: Vec<Vec<FieldElement>> = vec![];
    for c in candidates {
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        if chosen.iter().all(|b| !dependent(b, &c)) {
            chosen.push(c);
        }
        if chosen.len() == 2 {
            break;
        }
    }
    [chosen[0].clone(), chosen[1].clone()]
}

/// The pencil of cleared logarithmic forms tangent to diag(a), n = 3.
pub fn tangent_log_pencil(a: &Eigenvalues) -> Result<TangentLogPencil> {
    if a.len() != 3 {
        return Err(Error::Dimension {
            required: "n = 3",
            found: a.len(),
        });
    }
    if a.values().iter().any(|x| x.is_zero()) {
        return Err(Error::ZeroEigenvalue);
    }
    let residues = residue_basis(a.values());
    let w1 = cleared_log_form(a.field(), &residues[0])?;
    let w2 = cleared_log_form(a.field(), &residues[1])?;
    let x = VectorField::diagonal(a.values())?;
    for w in [&w1, &w2] {
        if !is_tangent(&x, w)? {
            return Err(Error::CertificateFailure("log form is not tangent to diag(a)".into()));
        }
    }
    let pencil = Pencil::new(w1, w2)?;
    Ok(TangentLogPencil { pencil, residues })
}

fn pattern_monomial(n: usize, vars: &[usize], i: usize) -> Monomial {
    let mut e = vec![0u32; n];
    for &j in vars {
        if j != i {
            e[j] = 1;
        }
    }
    Monomial::from_exponents(e)
}

/// Matches w = u * sum_{i in S} b_i x_{S \ i} dx_i with u(0) = 1, up to
/// terms of u of degree > order.
fn match_with_unit(coeffs: &[Poly], order: u32) -> Option<(Vec<usize>, Vec<FieldElement>, Poly)> {
    let n = coeffs.len();
    let vars: Vec<usize> = (0..n).filter(|&i| !coeffs[i].is_zero()).collect();
    if !(2..=3).contains(&vars.len()) {
        return None;
    }
    let field = coeffs[vars[0]].field().clone();
    let mut residues = vec![];
    let mut unit: Option<Poly> = None;
    for &i in &vars {
        let m = pattern_monomial(n, &vars, i);
        let b = coeffs[i].coefficient(&m);
        if b.is_zero() {
            return None;
        }
        let binv = b.inverse().ok()?;
        let cap = order + m.degree();
        let mut q = Poly::zero(&field, n);
        for (mono, c) in coeffs[i].terms() {
            if mono.degree() > cap {
                continue;
            }
            let Some(rest) = mono.div(&m) else {
                return None;
            };
            q = q.add(&Poly::monomial(c * &binv, rest));
        }
        match &unit {
            None => unit = Some(q),
            Some(u) if *u == q => {}
            Some(_) => return None,
        }
        residues.push(b);
    }
    Some((vars, residues, unit?))
}

/// Decides whether w is a unit times normal form (I) or (II) in the given
/// coordinates, comparing units up to degree `order`.
pub fn recognize_normal_form(w: &MeroForm, a: &Eigenvalues, order: u32, bound: u64) -> Result<SimpleSingularityReport> {
    if w.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            found: w.degree(),
        });
    }
    if a.len() != w.nvars() {
        return Err(Error::ArityMismatch {
            expected: w.nvars(),
            found: a.len(),
        });
    }
    if !is_strongly_diagonalizable(a) {
        return Err(Error::NotStronglyDiagonalizable);
    }
    let comps = one_form_polys(w)?;
    if !is_integrable(w) {
        return Err(Error::NotIntegrable);
    }
    if !is_tangent(&VectorField::diagonal(a.values())?, w)? {
        return Err(Error::NotTangent);
    }
    match match_with_unit(&comps, order) {
        None => Ok(SimpleSingularityReport::unmatched(Some(order))),
        Some((vars, residues, unit)) => {
            let mut r = SimpleSingularityReport::matched(vars, residues, bound)?;
            r.unit = Some(unit);
            r.order = Some(order);
            Ok(r)
        }
    }
}

fn one_form_polys(w: &MeroForm) -> Result<Vec<Poly>> {
    w.components()
        .iter()
        .map(|c| c.as_poly().cloned().ok_or(Error::NotPolynomial))
        .collect()
}

/// Reads the residues off the lowest-order part of w and runs the bounded
/// nonnegative resonance search on them.
pub fn simple_ch_check(w: &MeroForm, bound: u64) -> Result<SimpleSingularityReport> {
    if w.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            found: w.degree(),
        });
    }
    let comps = one_form_polys(w)?;
    let Some(nu) = comps.iter().filter_map(|c| c.order()).min() else {
        return Ok(SimpleSingularityReport::unmatched(None));
    };
    let lowest: Vec<Poly> = comps.iter().map(|c| c.homogeneous_part(nu)).collect();
    let n = comps.len();
    let vars: Vec<usize> = (0..n).filter(|&i| !lowest[i].is_zero()).collect();
    if vars.len() != nu as usize + 1 || !(2..=3).contains(&vars.len()) {
        return Ok(SimpleSingularityReport::unmatched(None));
    }
    let mut residues = vec![];
    for &i in &vars {
        let m = pattern_monomial(n, &vars, i);
        let b = lowest[i].coefficient(&m);
        if b.is_zero() || lowest[i].num_terms() != 1 {
            return Ok(SimpleSingularityReport::unmatched(None));
        }
        residues.push(b);
    }
    SimpleSingularityReport::matched(vars, residues, bound)
}

/// X = x3^m d/dx1 + x1^m d/dx2 + x2^m d/dx3 and w = i_R i_X (dx1 ^ dx2 ^ dx3).
pub fn jouanolou(m: u32) -> Result<(VectorField, MeroForm)> {
    if m < 2 {
        return Err(Error::BadDegree(m as usize));
    }
    let q = NumberField::rationals();
    let x = |i| Poly::var(&q, 3, i);
    let field = VectorField::from_polys(vec![x(2).pow(m), x(0).pow(m), x(1).pow(m)])?;
    let radial = VectorField::radial(&q, 3);
    let w = interior_product(&radial, &interior_product(&field, &MeroForm::volume(&q, 3))?)?;
    let ok = interior_product(&field, &w)?.is_zero()
        && interior_product(&radial, &w)?.is_zero()
        && is_integrable(&w);
    if !ok {
        return Err(Error::CertificateFailure("Jouanolou contraction identities".into()));
    }
    Ok((field, w))
}

/// Algebraic invariance of {f = 0}: f divides X(f).
pub fn invariant_hypersurface_check(x: &VectorField, f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    Ok(f.divides(&x.apply_poly(f)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSurface {
    pub f: Poly,
    /// g with X(f) = g f.
    pub cofactor: Poly,
    pub first_integral: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSearch {
    pub surfaces: Vec<InvariantSurface>,
    pub degree_cap: u32,
    /// Every eigenvalue of every reduced operator was found in the field, so
    /// the list is complete for the ansatz (homogeneous f, cofactor c x^beta).
    pub complete: bool,
}

fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn go(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == n - 1 {
            prefix.push(d);
            out.push(Monomial::from_exponents(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    go(n, d, &mut vec![], &mut out);
    out
}

/// Searches homogeneous f of degree 1..=cap with X(f) = c x^beta f, c in K.
/// For each (degree, beta) the condition is an eigenproblem for the operator
/// f -> X(f) / x^beta on the largest subspace where it is defined and stable.
pub fn invariant_hypersurface_search(x: &VectorField, degree_cap: u32) -> Result<SurfaceSearch> {
    let comps = x.poly_components()?;
    let field = x.field().clone();
    let n = x.nvars();
    let xdeg = comps.iter().filter_map(|c| c.total_degree()).max().unwrap_or(0);
    let mut surfaces: Vec<InvariantSurface> = vec![];
    let mut complete = true;
    if x.is_zero() {
        return Ok(SurfaceSearch {
            surfaces,
            degree_cap,
            complete: false,
        });
    }
    for d in 1..=degree_cap {
        let basis = monomials(n, d);
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let images: Vec<Poly> = basis
            .iter()
            .map(|m| x.apply_poly(&Poly::monomial(FieldElement::one(&field), m.clone())))
            .collect::<Result<_>>()?;
        for bdeg in 0..xdeg.max(1) {
            for beta in monomials(n, bdeg) {
                let (found, ok) = eigen_surfaces(&field, &basis, &index, &images, &beta)?;
                complete &= ok;
                for s in found {
                    if !surfaces.iter().any(|t| t.f == s.f) {
                        surfaces.push(s);
                    }
                }
            }
        }
    }
    Ok(SurfaceSearch {
        surfaces,
        degree_cap,
        complete,
    })
}

fn eigen_surfaces(
    field: &Arc<NumberField>,
    basis: &[Monomial],
    index: &BTreeMap<&Monomial, usize>,
    images: &[Poly],
    beta: &Monomial,
) -> Result<(Vec<InvariantSurface>, bool)> {
    let nb = basis.len();
    let zero = FieldElement::zero(field);
    let mut t: Matrix = vec![vec![zero.clone(); nb]; nb];
    let mut constraints: BTreeMap<Monomial, Vec<FieldElement>> = BTreeMap::new();
    for (j, img) in images.iter().enumerate() {
        for (mono, c) in img.terms() {
            match mono.div(beta).and_then(|r| index.get(&r).copied()) {
                Some(row) => t[row][j] = c.clone(),
                None => {
                    constraints.entry(mono.clone()).or_insert_with(|| vec![zero.clone(); nb])[j] = c.clone();
                }
            }
        }
    }
    let cmat: Matrix = constraints.into_values().collect();
    let mut w: Matrix = if cmat.is_empty() {
        (0..nb).map(|i| unit_vector(field, nb, i)).collect()
    } else {
        linalg::kernel(&cmat, nb, field)
    };
    // shrink to the largest T-stable subspace
    loop {
        if w.is_empty() {
            return Ok((vec![], true));
        }
        w = linalg::echelon_basis(&w, nb);
        let pivots: Vec<usize> = w.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
        let residual = |v: &[FieldElement]| -> Vec<FieldElement> {
            let mut r = v.to_vec();
            for (row, &p) in w.iter().zip(&pivots) {
                let c = v[p].clone();
                if !c.is_zero() {
                    for k in 0..nb {
                        r[k] = &r[k] - &(&c * &row[k]);
                    }
                }
            }
            r
        };
        let tw: Vec<Vec<FieldElement>> = w.iter().map(|v| linalg::mat_vec(&t, v, field)).collect();
        let res: Vec<Vec<FieldElement>> = tw.iter().map(|v| residual(v)).collect();
        // columns of the residual matrix are res[i]
        let rmat: Matrix = (0..nb).map(|k| res.iter().map(|r| r[k].clone()).collect()).collect();
        let ys = linalg::kernel(&rmat, w.len(), field);
        if ys.len() == w.len() {
            // stable: matrix of T in the basis w
            let k = w.len();
            let tm: Matrix = (0..k).map(|r| (0..k).map(|i| tw[i][pivots[r]].clone()).collect()).collect();
            let (roots, split) = eigenvalues_in_field(&tm, field);
            let mut out = vec![];
            for c in roots {
                let mut shifted = tm.clone();
                for (i, row) in shifted.iter_mut().enumerate() {
                    row[i] = &row[i] - &c;
                }
                for y in linalg::kernel(&shifted, k, field) {
                    let mut coeffs = vec![zero.clone(); nb];
                    for (yi, wi) in y.iter().zip(&w) {
                        for (acc, x) in coeffs.iter_mut().zip(wi) {
                            *acc = &*acc + &(yi * x);
                        }
                    }
                    let f = Poly::from_terms(
                        field,
                        beta.exponents().len(),
                        basis.iter().cloned().zip(coeffs),
                    )
                    .monic();
                    out.push(InvariantSurface {
                        f,
                        cofactor: Poly::monomial(c.clone(), beta.clone()),
                        first_integral: c.is_zero(),
                    });
                }
            }
            return Ok((out, split));
        }
        w = ys
            .iter()
            .map(|y| {
                let mut v = vec![zero.clone(); nb];
                for (yi, wi) in y.iter().zip(&w) {
                    for (acc, x) in v.iter_mut().zip(wi) {
                        *acc = &*acc + &(yi * x);
                    }
                }
                v
            })
            .collect();
    }
}

fn unit_vector(field: &Arc<NumberField>, n: usize, i: usize) -> Vec<FieldElement> {
    let mut v = vec![FieldElement::zero(field); n];
    v[i] = FieldElement::one(field);
    v
}

/// Distinct eigenvalues of `m` lying in K, and whether they exhaust the
/// characteristic polynomial. Candidates are the diagonal entries and, for
/// rational characteristic polynomials, the rational root theorem.
fn eigenvalues_in_field(m: &Matrix, field: &Arc<NumberField>) -> (Vec<FieldElement>, bool) {
    let mut p = linalg::char_poly(m, field);
    let mut roots: Vec<FieldElement> = vec![];
    let try_root = |p: &mut Vec<FieldElement>, c: &FieldElement, roots: &mut Vec<FieldElement>| {
        let mut hit = false;
        while p.len() > 1 {
            let (q, r) = synthetic_division(p, c);
            if !r.is_zero() {
                break;
            }
            *p = q;
            hit = true;
        }
        if hit && !roots.contains(c) {
            roots.push(c.clone());
        }
    };
    for (i, row) in m.iter().enumerate() {
        try_root(&mut p, &row[i], &mut roots);
    }
    try_root(&mut p, &FieldElement::zero(field), &mut roots);
    if p.len() > 1 {
        for c in rational_root_candidates(&p) {
            try_root(&mut p, &FieldElement::from_rational(field, c), &mut roots);
            if p.len() == 1 {
                break;
            }
        }
    }
    (roots, p.len() == 1)
}

/// Divides sum p_i t^i by (t - c); returns (quotient, remainder).
fn synthetic_division(p: &[FieldElement], c: &FieldElement) -> (Vec<FieldElement>, FieldElement) {
    let n = p.len();
    let mut q = vec![FieldElement::zero(c.field()); n - 1];
    let mut acc = p[n - 1].clone();
    for i in (0..n - 1).rev() {
        q[i] = acc.clone();
        acc = &p[i] + &(&acc * c);
    }
    (q, acc)
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn rational_root_candidates(p: &[FieldElement]) -> Vec<Rational> {
    let Some(rats) = p.iter().map(|c| c.as_rational().cloned()).collect::<Option<Vec<Rational>>>() else {
        return vec![];
    };
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let Some(low) = ints.iter().find(|c| !c.is_zero()) else {
        return vec![];
    };
    let high = ints.last().unwrap();
    let (Some(a0), Some(an)) = (low.abs().to_u64(), high.abs().to_u64()) else {
        return vec![];
    };
    if a0 > DIVISOR_LIMIT || an > DIVISOR_LIMIT {
        return vec![];
    }
    let mut out = vec![];
    for num in divisors(a0) {
        for den in divisors(an) {
            let r = Rational::new(BigInt::from(num), BigInt::from(den));
            for c in [r.clone(), -r] {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

/// bX(a) - aX(b) = (alpha_j - alpha_i) ab for every pair of coefficients
/// (a = w_i, b = w_j, i < j) of a form tangent to diag(alpha).
pub fn ratio_identities(w: &MeroForm, a: &Eigenvalues) -> Result<bool> {
    let comps = one_form_polys(w)?;
    let x = VectorField::diagonal(a.values())?;
    let xc: Vec<Poly> = comps.iter().map(|c| x.apply_poly(c)).collect::<Result<_>>()?;
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let lhs = comps[j].mul(&xc[i]).sub(&comps[i].mul(&xc[j]));
            let mu = &a.values()[j] - &a.values()[i];
            if lhs != comps[i].mul(&comps[j]).scale(&mu) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::axis_invariance;
    use crate::scalars::rat;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }
    fn x(i: usize) -> Poly {
        Poly::var(&q(), 3, i)
    }
    fn k(n: i64) -> FieldElement {
        FieldElement::from_int(&q(), n)
    }
    fn form(c: [Poly; 3]) -> MeroForm {
        MeroForm::one_form_poly(c.to_vec()).unwrap()
    }
    fn ev(v: &[i64]) -> Eigenvalues {
        Eigenvalues::from_ints(&q(), v).unwrap()
    }

    #[test]
    fn tangent_log_pencil_examples() {
        for a in [ev(&[1, 2, 3]), ev(&[1, 1, -2]), ev(&[2, -3, 7])] {
            let t = tangent_log_pencil(&a).unwrap();
            let diag = VectorField::diagonal(a.values()).unwrap();
            for (r, w) in t.residues.iter().zip([t.pencil.gen1(), t.pencil.gen2()]) {
                let s: FieldElement = r.iter().zip(a.values()).fold(k(0), |acc, (b, al)| &acc + &(b * al));
                assert!(s.is_zero());
                assert!(is_tangent(&diag, w).unwrap());
                assert!(ratio_identities(w, &a).unwrap());
            }
        }
        let w = form([&x(1) * &x(2), (&x(0) * &x(2)).neg(), Poly::zero(&q(), 3)]);
        assert!(is_tangent(&VectorField::diagonal(ev(&[1, 1, -2]).values()).unwrap(), &w).unwrap());
        assert_eq!(tangent_log_pencil(&ev(&[1, 0, 2])).unwrap_err(), Error::ZeroEigenvalue);
    }

    #[test]
    fn singular_axes_are_invariant() {
        let a = ev(&[1, 2, 3]);
        let t = tangent_log_pencil(&a).unwrap();
        let diag = VectorField::diagonal(a.values()).unwrap();
        for axis in 0..3 {
            assert!(axis_invariance(&diag, axis).unwrap());
        }
        // each coordinate axis lies in Sing(w): two coordinates vanish there
        for w in [t.pencil.gen1(), t.pencil.gen2()] {
            for axis in 0..3 {
                for c in one_form_polys(w).unwrap() {
                    let others: Vec<usize> = (0..3).filter(|&j| j != axis).collect();
                    assert!(c.restrict_zero(&others).is_zero());
                }
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        // (1, 2, 3) is resonant, so the diagonal part lives in Q(sqrt2, sqrt3)
        let f = NumberField::new("t", vec![rat(1, 1), rat(0, 1), rat(-10, 1), rat(0, 1), rat(1, 1)]).unwrap();
        let t = FieldElement::generator(&f);
        let half = crate::scalars::rat(1, 2);
        let s2 = (&t.pow(3) - &t.scale(&rat(9, 1))).scale(&half);
        let s3 = (&t.scale(&rat(11, 1)) - &t.pow(3)).scale(&half);
        let one = FieldElement::one(&f);
        let a = Eigenvalues::new(vec![one.clone(), s2.clone(), s3.clone()]).unwrap();
        let y = |i| Poly::var(&f, 3, i);
        let fm = |c: [Poly; 3]| MeroForm::one_form_poly(c.to_vec()).unwrap();
        let b = vec![&s2 - &s3, &s3 - &one, &one - &s2];
        let w = fm([(&y(1) * &y(2)).scale(&b[0]), (&y(0) * &y(2)).scale(&b[1]), (&y(0) * &y(1)).scale(&b[2])]);
        let r = recognize_normal_form(&w, &a, 4, 50).unwrap();
        assert_eq!(r.normal_form, Some(NormalForm::II));
        assert_eq!(r.residues, b);

        let z = Poly::zero(&f, 3);
        let w = fm([y(1).scale(&s2), y(0).neg(), z.clone()]);
        let r = recognize_normal_form(&w, &a, 4, 50).unwrap();
        assert_eq!(r.normal_form, Some(NormalForm::I));
        assert_eq!(r.residues, vec![s2.clone(), -&one]);
        assert_eq!(r.dimensional_type, Some(2));

        let u = &Poly::one(&f, 3) + &y(2);
        let w = fm([y(1).scale(&s2).mul(&u), y(0).neg().mul(&u), z.clone()]);
        for order in [4, 8] {
            let r = recognize_normal_form(&w, &a, order, 50).unwrap();
            assert_eq!(r.normal_form, Some(NormalForm::I));
            assert_eq!(r.unit, Some(u.clone()));
        }
        let bad = fm([y(1), y(0), z]);
        assert_eq!(recognize_normal_form(&bad, &a, 4, 50).unwrap_err(), Error::NotTangent);

        let w = form([&x(1) * &x(2), &x(0) * &x(2), (&x(0) * &x(1)).neg()]);
        assert_eq!(recognize_normal_form(&w, &ev(&[1, 2, 3]), 4, 50).unwrap_err(), Error::NotStronglyDiagonalizable);
    }

    #[test]
    fn unit_matching() {
        let u = &Poly::one(&q(), 3) + &x(2);
        let half = FieldElement::from_rational(&q(), rat(1, 2));
        let comps = [x(1).mul(&u), x(0).scale(&half).neg().mul(&u), Poly::zero(&q(), 3)];
        let (vars, res, unit) = match_with_unit(&comps, 4).unwrap();
        assert_eq!(vars, vec![0, 1]);
        assert_eq!(res, vec![k(1), FieldElement::from_rational(&q(), rat(-1, 2))]);
        assert_eq!(unit, u);
        // a mismatch beyond the order is invisible, below it is not
        let comps = [x(1).mul(&u), x(0).scale(&half).neg().mul(&(&u + &x(2).pow(3))), Poly::zero(&q(), 3)];
        assert!(match_with_unit(&comps, 2).is_some());
        assert!(match_with_unit(&comps, 3).is_none());
    }

    #[test]
    fn ch_check_examples() {
        let z = Poly::zero(&q(), 3);
        let r = simple_ch_check(&form([x(1).scale(&k(2)), x(0).scale(&k(3)), z.clone()]), 50).unwrap();
        assert_eq!((r.dimensional_type, r.complex_hyperbolic), (Some(2), true));
        assert_eq!(r.residues, vec![k(2), k(3)]);
        let r = simple_ch_check(&form([x(1), x(0).neg(), z.clone()]), 50).unwrap();
        assert!(!r.complex_hyperbolic);
        assert_eq!(r.resonance.unwrap().relation, Some(vec![1, 1]));
        let r = simple_ch_check(&form([&x(1) * &x(2), &x(0) * &x(2), (&x(0) * &x(1)).neg()]), 50).unwrap();
        assert_eq!(r.dimensional_type, Some(3));
        assert!(!r.complex_hyperbolic);
        let rel = r.resonance.unwrap().relation.unwrap();
        assert_eq!(rel[0] + rel[1] - rel[2], 0);
        let r = simple_ch_check(&form([x(0), x(1), z]), 50).unwrap();
        assert_eq!(r.normal_form, None);
    }

    #[test]
    fn jouanolou_examples() {
        let (_, w) = jouanolou(2).unwrap();
        let expected = form([
            &(&x(0).pow(2) * &x(2)) - &x(1).pow(3),
            &(&x(0) * &x(1).pow(2)) - &x(2).pow(3),
            &(&x(1) * &x(2).pow(2)) - &x(0).pow(3),
        ]);
        assert_eq!(w, expected);
        for m in 2..=4 {
            let (_, w) = jouanolou(m).unwrap();
            for c in one_form_polys(&w).unwrap() {
                assert!(c.is_homogeneous() && c.total_degree() == Some(m + 1));
            }
        }
        assert_eq!(jouanolou(1).unwrap_err(), Error::BadDegree(1));
    }

    #[test]
    fn hypersurface_examples() {
        let diag = VectorField::diagonal(ev(&[1, 2, 3]).values()).unwrap();
        assert!(invariant_hypersurface_check(&diag, &x(0)).unwrap());
        let (j, _) = jouanolou(2).unwrap();
        assert!(!invariant_hypersurface_check(&j, &x(0)).unwrap());
        for d in 1..=2 {
            for m in monomials(3, d) {
                let f = Poly::monomial(k(1), m);
                assert!(!invariant_hypersurface_check(&j, &f).unwrap());
            }
        }
        assert_eq!(invariant_hypersurface_check(&diag, &Poly::one(&q(), 3)).unwrap_err(), Error::ConstantPolynomial);
    }

    #[test]
    fn surface_search_examples() {
        let diag = VectorField::diagonal(ev(&[1, 2, 3]).values()).unwrap();
        let s = invariant_hypersurface_search(&diag, 1).unwrap();
        let fs: Vec<Poly> = s.surfaces.iter().map(|s| s.f.clone()).collect();
        assert_eq!(fs.len(), 3);
        for i in 0..3 {
            assert!(fs.contains(&x(i)));
        }
        assert!(s.complete);

        let (j, _) = jouanolou(2).unwrap();
        let s = invariant_hypersurface_search(&j, 2).unwrap();
        assert!(s.surfaces.is_empty());
        assert!(s.complete);

        let diag = VectorField::diagonal(ev(&[1, 1, -2]).values()).unwrap();
        let s = invariant_hypersurface_search(&diag, 3).unwrap();
        let fs: Vec<&Poly> = s.surfaces.iter().map(|s| &s.f).collect();
        for i in 0..3 {
            assert!(fs.contains(&&x(i)));
        }
        let xyz = &(&x(0) * &x(1)) * &x(2);
        let hit = s.surfaces.iter().find(|s| s.f == xyz).unwrap();
        assert!(hit.first_integral);
        for s in &s.surfaces {
            assert!(invariant_hypersurface_check(&diag, &s.f).unwrap());
        }
    }
}
