//! Blow-up charts, strict transforms and dicriticality.
//!
//! A chart is named by its exceptional coordinate k. Punctual: x_k = y_k and
//! x_j = y_k*y_j for j != k. Monoidal along the x_a-axis (center
//! {x_m = 0, m != a}): x_a = y_a, x_k = y_k, x_j = y_k*y_j for the rest.
//! The exceptional divisor is {y_k = 0} in both cases.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{MeroForm, VectorField};
use crate::polyalg::{poly_gcd, Monomial, Poly};
use crate::scalars::{FieldElement, NumberField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowupChart {
    Punctual { chart: usize },
    Monoidal { axis: usize, chart: usize },
}

impl BlowupChart {
    pub fn validate(&self, nvars: usize) -> Result<()> {
        match *self {
            BlowupChart::Punctual { chart } if chart < nvars => Ok(()),
            BlowupChart::Punctual { chart } => Err(Error::BadChart(format!(
                "chart x{} out of range for {} variables",
                chart + 1,
                nvars
            ))),
            BlowupChart::Monoidal { axis, chart } => {
                if nvars < 3 {
                    Err(Error::BadChart("monoidal blow-up needs at least 3 variables".into()))
                } else if axis >= nvars || chart >= nvars {
                    Err(Error::BadChart("index out of range".into()))
                } else if axis == chart {
                    Err(Error::BadChart(format!(
                        "chart x{} lies along the center x{}-axis",
                        chart + 1,
                        axis + 1
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Index k of the exceptional coordinate.
    pub fn exceptional(&self) -> usize {
        match *self {
            BlowupChart::Punctual { chart } | BlowupChart::Monoidal { chart, .. } => chart,
        }
    }

    /// Coordinates j with x_j = y_k*y_j.
    pub fn divided(&self, nvars: usize) -> Vec<usize> {
        let k = self.exceptional();
        match *self {
            BlowupChart::Punctual { .. } => (0..nvars).filter(|&j| j != k).collect(),
            BlowupChart::Monoidal { axis, .. } => (0..nvars).filter(|&j| j != k && j != axis).collect(),
        }
    }

    /// x_i as polynomials in the chart coordinates y.
    pub fn substitution(&self, field: &Arc<NumberField>, nvars: usize) -> Vec<Poly> {
        let k = self.exceptional();
        let divided = self.divided(nvars);
        (0..nvars)
            .map(|i| {
                let yi = Poly::var(field, nvars, i);
                if divided.contains(&i) {
                    yi.mul(&Poly::var(field, nvars, k))
                } else {
                    yi
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictTransform<T> {
    pub object: T,
    /// Power of y_k divided out of the total transform. For a vector field
    /// that does not vanish on the center this is -1 (a pole was cleared).
    pub exceptional_multiplicity: i32,
    pub dicritical: bool,
}

fn power_of_var(p: &Poly, k: usize) -> u32 {
    p.monomial_content().exponents()[k]
}

fn gcd_all(field: &Arc<NumberField>, nvars: usize, ps: &[Poly]) -> Result<Poly> {
    ps.iter()
        .try_fold(Poly::zero(field, nvars), |g, p| if p.is_zero() { Ok(g) } else { poly_gcd(&g, p) })
}

/// Push-forward of X to chart coordinates, with the common factor removed.
pub fn transform_vector_field(x: &VectorField, chart: &BlowupChart) -> Result<StrictTransform<VectorField>> {
    let n = x.nvars();
    chart.validate(n)?;
    if x.is_zero() {
        return Err(Error::ZeroField);
    }
    let field = x.field().clone();
    let k = chart.exceptional();
    let sub: Vec<Option<Poly>> = chart.substitution(&field, n).into_iter().map(Some).collect();
    let pulled: Vec<Poly> = x.poly_components()?.iter().map(|c| c.compose(&sub)).collect();
    let divided = chart.divided(n);
    let yk = Poly::var(&field, n, k);
    // y_j = x_j / x_k gives (X_j - y_j X_k) / y_k; everything is multiplied by y_k
    let cleared: Vec<Poly> = (0..n)
        .map(|i| {
            if divided.contains(&i) {
                pulled[i].sub(&Poly::var(&field, n, i).mul(&pulled[k]))
            } else {
                pulled[i].mul(&yk)
            }
        })
        .collect();
    let g = gcd_all(&field, n, &cleared)?;
    let comps: Vec<Poly> = cleared.iter().map(|c| c.exact_div(&g).expect("gcd divides")).collect();
    let dicritical = !yk.divides(&comps[k]);
    Ok(StrictTransform {
        object: VectorField::from_polys(comps)?,
        exceptional_multiplicity: power_of_var(&g, k) as i32 - 1,
        dicritical,
    })
}

/// Pullback of a polynomial 1-form along x = phi(y).
pub fn pullback_one_form(w: &MeroForm, phi: &[Poly]) -> Result<MeroForm> {
    let n = w.nvars();
    let sub: Vec<Option<Poly>> = phi.iter().cloned().map(Some).collect();
    let mut out = vec![Poly::zero(w.field(), n); n];
    for (idx, c) in w.poly_coeffs()? {
        if idx.len() != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                found: idx.len(),
            });
        }
        let ci = c.compose(&sub);
        for (j, slot) in out.iter_mut().enumerate() {
            let dphi = phi[idx[0]].partial_derivative(j)?;
            if !dphi.is_zero() {
                *slot = slot.add(&ci.mul(&dphi));
            }
        }
    }
    MeroForm::one_form_poly(out)
}

/// Pullback of a 1-form with strict division by the gcd of its coefficients.
pub fn transform_form(w: &MeroForm, chart: &BlowupChart) -> Result<StrictTransform<MeroForm>> {
    let n = w.nvars();
    chart.validate(n)?;
    if w.is_zero() {
        return Err(Error::ZeroForm);
    }
    let field = w.field().clone();
    let k = chart.exceptional();
    let total = pullback_one_form(w, &chart.substitution(&field, n))?;
    let coeffs: Vec<Poly> = total
        .components()
        .iter()
        .map(|c| c.as_poly().cloned().expect("polynomial pullback"))
        .collect();
    let g = gcd_all(&field, n, &coeffs)?;
    let strict: Vec<Poly> = coeffs.iter().map(|c| c.exact_div(&g).expect("gcd divides")).collect();
    let yk = Poly::var(&field, n, k);
    // the divisor is invariant iff w restricted to y_k = 0 is a multiple of dy_k
    let dicritical = strict.iter().enumerate().any(|(j, c)| j != k && !yk.divides(c));
    Ok(StrictTransform {
        object: MeroForm::one_form_poly(strict)?,
        exceptional_multiplicity: power_of_var(&g, k) as i32,
        dicritical,
    })
}

/// Is the x_axis-axis invariant by X?
pub fn axis_invariance(x: &VectorField, axis: usize) -> Result<bool> {
    let n = x.nvars();
    if axis >= n {
        return Err(Error::IndexOutOfRange { index: axis, nvars: n });
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != axis).collect();
    let comps = x.poly_components()?;
    Ok(others.iter().all(|&i| comps[i].restrict_zero(&others).is_zero()))
}

/// Eigenvalues of the linear part of X when it is diagonal in these coordinates.
pub fn diagonal_linear_part(x: &VectorField) -> Result<Option<Vec<FieldElement>>> {
    let n = x.nvars();
    let mut out = Vec::with_capacity(n);
    for (i, c) in x.poly_components()?.iter().enumerate() {
        let lin = c.homogeneous_part(1);
        let mi = Monomial::var(n, i);
        let ci = lin.coefficient(&mi);
        let expected = if ci.is_zero() {
            Poly::zero(x.field(), n)
        } else {
            Poly::monomial(ci.clone(), mi)
        };
        if lin != expected {
            return Ok(None);
        }
        out.push(ci);
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::is_tangent;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn x(i: usize) -> Poly {
        Poly::var(&q(), 3, i)
    }

    fn k(n: i64) -> FieldElement {
        FieldElement::from_int(&q(), n)
    }

    fn diag(a: &[i64]) -> VectorField {
        VectorField::diagonal(&a.iter().map(|&v| k(v)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn diagonal_field_charts() {
        let p1 = BlowupChart::Punctual { chart: 0 };
        let t = transform_vector_field(&diag(&[2, 5, 7]), &p1).unwrap();
        assert_eq!(t.object, diag(&[2, 3, 5]));
        assert_eq!(t.exceptional_multiplicity, 0);
        assert!(!t.dicritical);
        let m = BlowupChart::Monoidal { axis: 0, chart: 1 };
        let t = transform_vector_field(&diag(&[2, 5, 7]), &m).unwrap();
        assert_eq!(diagonal_linear_part(&t.object).unwrap().unwrap(), vec![k(2), k(5), k(2)]);
    }

    #[test]
    fn radial_field_is_dicritical() {
        let r = VectorField::radial(&q(), 3);
        let t = transform_vector_field(&r, &BlowupChart::Punctual { chart: 0 }).unwrap();
        assert_eq!(t.object, VectorField::coordinate(&q(), 3, 0));
        assert_eq!(t.exceptional_multiplicity, 1);
        assert!(t.dicritical);
    }

    #[test]
    fn form_transforms() {
        let p1 = BlowupChart::Punctual { chart: 0 };
        let dx1 = MeroForm::dx(&q(), 3, 0);
        let t = transform_form(&dx1, &p1).unwrap();
        assert_eq!((t.object, t.exceptional_multiplicity), (dx1, 0));

        let w = MeroForm::one_form_poly(vec![x(1), x(0).neg(), Poly::zero(&q(), 3)]).unwrap();
        let total = pullback_one_form(&w, &p1.substitution(&q(), 3)).unwrap();
        assert_eq!(total, MeroForm::dx(&q(), 3, 1).scale_poly(&x(0).pow(2).neg()));
        let t = transform_form(&w, &p1).unwrap();
        assert_eq!(t.object, MeroForm::dx(&q(), 3, 1).neg());
        assert_eq!(t.exceptional_multiplicity, 2);
        assert!(t.dicritical);

        let log = MeroForm::one_form_poly(vec![&x(1) * &x(2), &x(0) * &x(2), (&x(0) * &x(1)).neg()]).unwrap();
        let t = transform_form(&log, &p1).unwrap();
        assert_eq!(t.object, log);
        assert_eq!(t.exceptional_multiplicity, 2);
        assert!(!t.dicritical);
    }

    #[test]
    fn tangency_survives_blowup() {
        let a = diag(&[1, 2, 3]);
        let w = MeroForm::one_form_poly(vec![&x(1) * &x(2), &x(0) * &x(2), (&x(0) * &x(1)).neg()]).unwrap();
        assert!(is_tangent(&a, &w).unwrap());
        for c in [
            BlowupChart::Punctual { chart: 0 },
            BlowupChart::Punctual { chart: 2 },
            BlowupChart::Monoidal { axis: 2, chart: 0 },
        ] {
            let xt = transform_vector_field(&a, &c).unwrap().object;
            let wt = transform_form(&w, &c).unwrap().object;
            assert!(is_tangent(&xt, &wt).unwrap());
        }
    }

    #[test]
    fn axis_invariance_examples() {
        assert!(axis_invariance(&diag(&[1, 2, 3]), 0).unwrap());
        let y = VectorField::from_polys(vec![x(1), x(0), x(2)]).unwrap();
        assert!(!axis_invariance(&y, 0).unwrap());
        let j = VectorField::from_polys(vec![x(2).pow(2), x(0).pow(2), x(1).pow(2)]).unwrap();
        assert!(!axis_invariance(&j, 0).unwrap());
    }
}
