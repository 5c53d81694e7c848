//! Acceptance suite: one line per criterion, all of them required.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use foliation_cli::corpus::{run_corpus, run_source, CORPUS};
use foliation_cli::report::{strip_timing, Options};
use foliation_cli::script::{parse, pretty};
use foliation_core::pencil::random_parameters;
use foliation_core::scalars::int;
use foliation_core::*;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q() -> Arc<NumberField> {
    NumberField::rationals()
}

/// Q(t), t^3 = 2.
fn cubic() -> Arc<NumberField> {
    NumberField::new("t", vec![int(-2), int(0), int(0), int(1)]).unwrap()
}

/// Q(t), t^4 - 10 t^2 + 1 = 0: t = sqrt2 + sqrt3.
fn quartic() -> Arc<NumberField> {
    NumberField::new("t", vec![int(1), int(0), int(-10), int(0), int(1)]).unwrap()
}

fn fe(f: &Arc<NumberField>, coords: &[i64]) -> FieldElement {
    let mut c: Vec<Rational> = coords.iter().map(|&x| int(x)).collect();
    c.resize(f.degree(), Rational::zero());
    FieldElement::from_coords(f, c).unwrap()
}

fn k(f: &Arc<NumberField>, n: i64) -> FieldElement {
    FieldElement::from_int(f, n)
}

fn x(f: &Arc<NumberField>, i: usize) -> Poly {
    Poly::var(f, 3, i)
}

fn random_element<R: Rng>(rng: &mut R, f: &Arc<NumberField>, r: i64) -> FieldElement {
    let c: Vec<i64> = (0..f.degree()).map(|_| rng.gen_range(-r..=r)).collect();
    fe(f, &c)
}

fn random_poly<R: Rng>(rng: &mut R, f: &Arc<NumberField>, max_deg: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(f, 3);
    for _ in 0..terms {
        let e: Vec<u32> = (0..3).map(|_| rng.gen_range(0..=max_deg)).collect();
        if e.iter().sum::<u32>() > max_deg {
            continue;
        }
        let c = rng.gen_range(-5i64..=5);
        p = p.add(&Poly::monomial(k(f, c), Monomial::from_exponents(e)));
    }
    p
}

fn d(p: &Poly) -> MeroForm {
    ext_derivative(&MeroForm::function(RatFunc::from_poly(p.clone())))
}

/// Rank over Q of the coordinate matrix of field elements, by plain
/// Gaussian elimination on rationals.
fn coordinate_rank(elems: &[FieldElement]) -> usize {
    let mut rows: Vec<Vec<Rational>> = elems.iter().map(|e| e.coords().to_vec()).collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &rows[rank][col];
                let pivot = rows[rank].clone();
                for (c, v) in rows[r].iter_mut().enumerate() {
                    *v -= &factor * &pivot[c];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Strongly non-resonant in dimension 3 over a field of degree >= 3 means the
/// three eigenvalues are Q-linearly independent.
fn independent(a: &[FieldElement]) -> bool {
    coordinate_rank(a) == a.len()
}

fn random_nonresonant<R: Rng>(rng: &mut R, f: &Arc<NumberField>) -> Vec<FieldElement> {
    loop {
        let a: Vec<FieldElement> = (0..3).map(|_| random_element(rng, f, 4)).collect();
        if independent(&a) {
            return a;
        }
    }
}

fn charts() -> Vec<BlowupChart> {
    let mut out: Vec<BlowupChart> = (0..3).map(|chart| BlowupChart::Punctual { chart }).collect();
    for axis in 0..3 {
        for chart in (0..3).filter(|&c| c != axis) {
            out.push(BlowupChart::Monoidal { axis, chart });
        }
    }
    out
}

// ------------------------------------------------------------ criterion 1

fn blowup_eigenvalue_law_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = cubic();
    let mut checked = 0;
    while checked < 100 {
        let a: Vec<FieldElement> = (0..3).map(|_| random_element(&mut rng, &f, 6)).collect();
        let expected_punctual = vec![a[0].clone(), &a[1] - &a[0], &a[2] - &a[0]];
        // the monoidal case written (a1, a2, a3 - a2): center the x1-axis, exceptional x2
        let expected_monoidal = vec![a[0].clone(), a[1].clone(), &a[2] - &a[1]];
        // the strict transform keeps the linear part only while two of its
        // entries are nonzero (otherwise a coordinate factor is divided out)
        let generic = |v: &[FieldElement]| v.iter().filter(|x| !x.is_zero()).count() >= 2;
        if !generic(&expected_punctual) || !generic(&expected_monoidal) {
            continue;
        }
        let xd = VectorField::diagonal(&a).map_err(|e| e.to_string())?;
        for (chart, expected) in [
            (BlowupChart::Punctual { chart: 0 }, &expected_punctual),
            (BlowupChart::Monoidal { axis: 0, chart: 1 }, &expected_monoidal),
        ] {
            let t = transform_vector_field(&xd, &chart).map_err(|e| e.to_string())?;
            let lin = diagonal_linear_part(&t.object).map_err(|e| e.to_string())?;
            ensure(lin.as_ref() == Some(expected), || format!("{chart:?} on {a:?}: got {lin:?}"))?;
            let law = blowup_eigenvalue_law(&Eigenvalues::new(a.clone()).unwrap(), &chart).map_err(|e| e.to_string())?;
            ensure(law.values() == expected.as_slice(), || format!("law {chart:?} on {a:?}"))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} triples, punctual chart 1 and monoidal chart"))
}

// ------------------------------------------------------------ criterion 2

fn strong_resonance_preservation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fields = [cubic(), quartic()];
    for i in 0..50 {
        let f = &fields[i % 2];
        let a = random_nonresonant(&mut rng, f);
        let ev = Eigenvalues::new(a.clone()).unwrap();
        ensure(is_strongly_diagonalizable(&ev), || format!("oracle and toolkit disagree on {a:?}"))?;
        let xd = VectorField::diagonal(&a).unwrap();
        for chart in charts() {
            let b = blowup_eigenvalue_law(&ev, &chart).map_err(|e| e.to_string())?;
            ensure(independent(b.values()) && is_strongly_diagonalizable(&b), || {
                format!("{chart:?} on {a:?} gives a resonant triple")
            })?;
            let t = transform_vector_field(&xd, &chart).map_err(|e| e.to_string())?;
            let lin = diagonal_linear_part(&t.object).map_err(|e| e.to_string())?;
            ensure(lin.as_deref() == Some(b.values()), || format!("{chart:?}: transform disagrees with law"))?;
        }
    }
    Ok("50 triples over degree 3 and 4 fields, 9 charts each".into())
}

// ------------------------------------------------------------ criteria 3, 4

fn strongly_diagonalizable_triples() -> Vec<Vec<FieldElement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fields = [cubic(), quartic()];
    (0..25).map(|i| random_nonresonant(&mut rng, &fields[i % 2])).collect()
}

fn tangent_log_pencils_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for a in strongly_diagonalizable_triples() {
        let ev = Eigenvalues::new(a.clone()).unwrap();
        let t = tangent_log_pencil(&ev).map_err(|e| e.to_string())?;
        let (w1, w2) = (t.pencil.gen1(), t.pencil.gen2());
        ensure(!wedge(w1, w2).unwrap().is_zero(), || "dependent generators".into())?;
        ensure(is_integrable(w1) && is_integrable(w2), || "non-integrable generator".into())?;
        let cond = wedge(w1, &ext_derivative(w2)).unwrap().add(&wedge(w2, &ext_derivative(w1)).unwrap());
        ensure(cond.is_zero(), || "pencil condition fails".into())?;
        let xd = VectorField::diagonal(&a).unwrap();
        let f = ev.field().clone();
        for _ in 0..10 {
            let (p, r) = random_parameters(&mut rng);
            let m = t.pencil.member(&k(&f, p), &k(&f, r)).map_err(|e| e.to_string())?;
            ensure(is_tangent(&xd, &m).unwrap(), || format!("member ({p}, {r}) not tangent"))?;
        }
    }
    Ok("25 pencils valid, 250 sampled members tangent".into())
}

fn ratio_identities_check() -> Check {
    for a in strongly_diagonalizable_triples() {
        let ev = Eigenvalues::new(a.clone()).unwrap();
        let t = tangent_log_pencil(&ev).map_err(|e| e.to_string())?;
        let xd = VectorField::diagonal(&a).unwrap();
        for (w, residues) in [t.pencil.gen1(), t.pencil.gen2()].into_iter().zip(&t.residues) {
            let c: Vec<Poly> = (0..3).map(|i| w.coefficient(&[i]).as_poly().unwrap().clone()).collect();
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                let lhs = c[j].mul(&xd.apply_poly(&c[i]).unwrap()).sub(&c[i].mul(&xd.apply_poly(&c[j]).unwrap()));
                let rhs = c[i].mul(&c[j]).scale(&(&a[j] - &a[i]));
                ensure(lhs == rhs, || format!("identity ({}, {}) fails", i + 1, j + 1))?;
            }
            for order in [4, 8] {
                let r = recognize_normal_form(w, &ev, order, 50).map_err(|e| e.to_string())?;
                let nonzero: Vec<FieldElement> = residues.iter().filter(|b| !b.is_zero()).cloned().collect();
                let expected = if nonzero.len() == 3 { NormalForm::II } else { NormalForm::I };
                ensure(r.normal_form == Some(expected), || format!("order {order}: {:?}", r.normal_form))?;
                ensure(r.residues == nonzero, || format!("residues {:?} != {:?}", r.residues, residues))?;
            }
        }
    }
    Ok("identities exact on 50 generators; form II with the built residues at orders 4 and 8".into())
}

// ------------------------------------------------------------ criterion 5

/// Pencils from several constructions, all over Q.
fn constructed_pencils() -> Vec<Pencil> {
    let f = q();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = vec![];
    // tangent logarithmic pencils of integer diagonal fields
    for a in [[1, 2, 3], [1, 1, -2], [2, -3, 7], [3, 5, -4], [1, 4, 9]] {
        out.push(tangent_log_pencil(&Eigenvalues::from_ints(&f, &a).unwrap()).unwrap().pencil);
    }
    // logarithmic pencils on random arrangements of four planes
    while out.len() < 15 {
        let mut fs: Vec<Poly> = (0..3).map(|i| x(&f, i)).collect();
        let l = (0..3).fold(Poly::from_int(&f, 3, rng.gen_range(0..=2)), |acc, i| {
            acc.add(&x(&f, i).scale(&k(&f, rng.gen_range(1..=3))))
        });
        fs.push(l);
        let lam: Vec<FieldElement> = (0..4).map(|_| k(&f, rng.gen_range(-3..=3))).collect();
        let mu: Vec<FieldElement> = (0..4).map(|_| k(&f, rng.gen_range(-3..=3))).collect();
        if let Ok(p) = log_pencil(&fs, &lam, &mu) {
            out.push(p);
        }
    }
    // (F_u(f, g) df, F_v(f, g) dg) for F = u^2 v + v^3 and random f, g
    while out.len() < 25 {
        let a = random_poly(&mut rng, &f, 2, 3).add(&x(&f, rng.gen_range(0..3)));
        let b = random_poly(&mut rng, &f, 2, 3).add(&x(&f, rng.gen_range(0..3)));
        let fu = a.mul(&b).scale(&k(&f, 2));
        let fv = a.mul(&a).add(&b.mul(&b).scale(&k(&f, 3)));
        if let Ok(p) = Pencil::new(d(&a).scale_poly(&fu), d(&b).scale_poly(&fv)) {
            out.push(p);
        }
    }
    out
}

/// Integrable pairs (df, h dg) failing the pencil condition.
fn non_pencil_pairs() -> Vec<(MeroForm, MeroForm)> {
    let f = q();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut out = vec![];
    while out.len() < 10 {
        let a = random_poly(&mut rng, &f, 2, 3).add(&x(&f, 0));
        let b = random_poly(&mut rng, &f, 2, 3).add(&x(&f, 1));
        let h = random_poly(&mut rng, &f, 2, 3).add(&x(&f, 2));
        let (w1, w2) = (d(&a), d(&b).scale_poly(&h));
        if is_integrable(&w1) && is_integrable(&w2) && !pencil_condition(&w1, &w2).unwrap() {
            out.push((w1, w2));
        }
    }
    out
}

fn pencil_condition_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let f = q();
    let pencils = constructed_pencils();
    for p in &pencils {
        for _ in 0..10 {
            let (a, b) = random_parameters(&mut rng);
            let m = p.raw_member(&k(&f, a), &k(&f, b)).unwrap();
            ensure(is_integrable(&m), || format!("member ({a}, {b}) of a pencil is not integrable"))?;
        }
    }
    for (w1, w2) in non_pencil_pairs() {
        let failed = (0..10).any(|_| {
            let (a, b) = random_parameters(&mut rng);
            !is_integrable(&w1.scale_const(&k(&f, a)).add(&w2.scale_const(&k(&f, b))))
        });
        ensure(failed, || "a non-pencil pair had only integrable sampled members".into())?;
    }
    Ok(format!("{} pencils x 10 members integrable; 10 non-pencils each caught", pencils.len()))
}

// ------------------------------------------------------------ criterion 6

fn theta_certificate_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = q();
    let pencils = constructed_pencils();
    for p in &pencils {
        let theta = p.connection_form();
        for w in [p.gen1(), p.gen2()] {
            ensure(ext_derivative(w) == wedge(theta, w).unwrap(), || "dw != theta ^ w on a generator".into())?;
        }
        for _ in 0..10 {
            let (a, b) = random_parameters(&mut rng);
            let w = p.raw_member(&k(&f, a), &k(&f, b)).unwrap();
            ensure(ext_derivative(&w) == wedge(theta, &w).unwrap(), || format!("member ({a}, {b})"))?;
        }
        let first = connection_form_with(p.gen1(), p.gen2(), YChoice::First).map_err(|e| e.to_string())?;
        let last = connection_form_with(p.gen1(), p.gen2(), YChoice::Last).map_err(|e| e.to_string())?;
        ensure(first == last && first == *theta, || "Y-choices give different theta".into())?;
    }
    Ok(format!("{} pencils: generators, 10 members each, two Y-choices agree", pencils.len()))
}

// ------------------------------------------------------------ criteria 7, 9

fn corpus_pencils() -> Vec<(String, Pencil)> {
    let mut out = vec![];
    for (name, src) in CORPUS {
        let (_, runner) = run_source(name, src, &Options::default()).unwrap();
        out.extend(runner.pencils.into_iter().map(|(line, p)| (format!("{name}:{line}"), p)));
    }
    out
}

fn closed(w: &MeroForm) -> bool {
    ext_derivative(w).is_zero()
}

fn classification_soundness() -> Check {
    let pencils = corpus_pencils();
    let (mut integrals, mut closed_forms) = (0, 0);
    for (at, p) in &pencils {
        let c = match p.classify() {
            Err(Error::CertificateFailure(m)) => return Err(format!("{at}: certificate failure {m}")),
            Err(e) => return Err(format!("{at}: {e}")),
            Ok(c) => c,
        };
        let (w1, w2) = (p.gen1(), p.gen2());
        if let Some(phi) = c.axis_first_integral() {
            ensure(!phi.is_constant(), || format!("{at}: constant first integral"))?;
            let dphi = ext_derivative(&MeroForm::function(phi.clone()));
            ensure(wedge(&wedge(&dphi, w1).unwrap(), w2).unwrap().is_zero(), || format!("{at}: dPhi ^ w1 ^ w2 != 0"))?;
            integrals += 1;
        }
        match &c {
            PencilClassification::FlatHolomorphicFirstIntegral { theta, potential } => {
                ensure(closed(theta) && d(potential) == *theta, || format!("{at}: theta is not dh"))?;
                closed_forms += 1;
            }
            PencilClassification::FlatMeromorphic { theta, .. } => {
                ensure(closed(theta), || format!("{at}: theta not closed"))?;
                closed_forms += 1;
            }
            PencilClassification::ConstantCurvatureFactor { closed_member, .. } => {
                if let Some(w) = closed_member {
                    ensure(closed(w), || format!("{at}: member not closed"))?;
                    closed_forms += 1;
                }
            }
            PencilClassification::NonconstantCurvatureFactor { .. } => {}
        }
    }
    Ok(format!(
        "{} corpus pencils; {integrals} first integrals and {closed_forms} closed certificates re-checked",
        pencils.len()
    ))
}

fn codim1_sampling() -> Check {
    let pencils = corpus_pencils();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0;
    for (at, p) in &pencils {
        let s = codim1_sample(p, 20, &mut rng).map_err(|e| e.to_string())?;
        // the sampler's verdict against an independent gcd recomputation
        for (a, b, g) in &s.exceptional {
            let m = p.raw_member(&k(p.field(), *a), &k(p.field(), *b)).unwrap();
            ensure(m.poly_coeffs().unwrap().iter().all(|(_, c)| g.divides(c)), || format!("{at}: bad locus"))?;
        }
        ensure(s.exceptional.len() <= foliation_cli::run::EXCEPTIONAL_CAP, || {
            format!("{at}: {} exceptional parameters", s.exceptional.len())
        })?;
        worst = worst.max(s.exceptional.len());
    }
    Ok(format!("{} corpus pencils, at most {worst} exceptional of 20 (cap 2)", pencils.len()))
}

// ------------------------------------------------------------ criterion 8

fn jouanolou_check() -> Check {
    let f = q();
    let (x1, x2, x3) = (x(&f, 0), x(&f, 1), x(&f, 2));
    let expected = MeroForm::one_form_poly(vec![
        x1.pow(2).mul(&x3).sub(&x2.pow(3)),
        x1.mul(&x2.pow(2)).sub(&x3.pow(3)),
        x2.mul(&x3.pow(2)).sub(&x1.pow(3)),
    ])
    .unwrap();
    for m in [2u32, 3] {
        let (xf, w) = jouanolou(m).map_err(|e| e.to_string())?;
        if m == 2 {
            ensure(w == expected, || format!("m = 2 expansion: {w}"))?;
        }
        let r = VectorField::radial(&f, 3);
        ensure(interior_product(&xf, &w).unwrap().is_zero(), || format!("m = {m}: i_X w != 0"))?;
        ensure(interior_product(&r, &w).unwrap().is_zero(), || format!("m = {m}: i_R w != 0"))?;
        ensure(wedge(&w, &ext_derivative(&w)).unwrap().is_zero(), || format!("m = {m}: w ^ dw != 0"))?;
        let s = invariant_hypersurface_search(&xf, 2).map_err(|e| e.to_string())?;
        ensure(s.surfaces.is_empty() && s.complete, || format!("m = {m}: {} surfaces", s.surfaces.len()))?;
    }
    Ok("m = 2, 3: expansion, contractions, integrability, no surface up to degree 2".into())
}

// ------------------------------------------------------------ criterion 10

/// Pairwise non-associate irreducible factors: planes through or off the
/// origin, and x_i^2 + (a plane in another variable), which is linear in
/// that variable with unit coefficient.
fn factor_pool<R: Rng>(rng: &mut R, f: &Arc<NumberField>) -> Vec<Poly> {
    let mut pool: Vec<Poly> = vec![];
    while pool.len() < 6 {
        let p = if rng.gen_bool(0.6) {
            (0..3).fold(Poly::from_int(f, 3, rng.gen_range(-2..=2)), |acc, i| {
                acc.add(&x(f, i).scale(&k(f, rng.gen_range(-2..=2))))
            })
        } else {
            let i = rng.gen_range(0..3);
            let j = (i + rng.gen_range(1..3)) % 3;
            x(f, i)
                .pow(2)
                .add(&x(f, j).scale(&k(f, rng.gen_range(1..=3))))
                .add(&Poly::from_int(f, 3, rng.gen_range(-2..=2)))
        };
        if p.total_degree().unwrap_or(0) == 0 {
            continue;
        }
        let monic = p.monic();
        if pool.iter().all(|g| g.monic() != monic) {
            pool.push(p);
        }
    }
    pool
}

fn product(f: &Arc<NumberField>, factors: &[&Poly]) -> Poly {
    factors.iter().fold(Poly::one(f, 3), |acc, p| acc.mul(p))
}

/// The common divisor of largest degree among all sub-products of the known
/// factorisation of `a`, tested against `b` by exact division.
fn divisor_oracle(f: &Arc<NumberField>, a_factors: &[&Poly], b: &Poly) -> Poly {
    let n = a_factors.len();
    let mut best = Poly::one(f, 3);
    for mask in 0u32..(1 << n) {
        let sub: Vec<&Poly> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| a_factors[i]).collect();
        let cand = product(f, &sub);
        if cand.total_degree() > best.total_degree() && cand.divides(b) {
            best = cand;
        }
    }
    best.monic()
}

fn random_factors<'a, R: Rng>(rng: &mut R, pool: &'a [Poly], max_deg: u32) -> Vec<&'a Poly> {
    let mut out = vec![];
    let mut deg = 0;
    for _ in 0..rng.gen_range(0..=3) {
        let p = &pool[rng.gen_range(0..pool.len())];
        let dp = p.total_degree().unwrap();
        if deg + dp <= max_deg {
            deg += dp;
            out.push(p);
        }
    }
    out
}

fn gcd_oracle_check() -> Check {
    let f = q();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut nontrivial = 0;
    for i in 0..200 {
        let pool = factor_pool(&mut rng, &f);
        let g = random_factors(&mut rng, &pool, 3);
        let dg: u32 = g.iter().map(|p| p.total_degree().unwrap()).sum();
        let p = random_factors(&mut rng, &pool, 6 - dg);
        let r = random_factors(&mut rng, &pool, 6 - dg);
        let scale_a = k(&f, rng.gen_range(1..=4));
        let scale_b = k(&f, -rng.gen_range(1..=4));
        let a_factors: Vec<&Poly> = g.iter().chain(&p).copied().collect();
        let b_factors: Vec<&Poly> = g.iter().chain(&r).copied().collect();
        let a = product(&f, &a_factors).scale(&scale_a);
        let b = product(&f, &b_factors).scale(&scale_b);
        ensure(a.total_degree() <= Some(6) && b.total_degree() <= Some(6), || "degree above 6".into())?;
        let expected = divisor_oracle(&f, &a_factors, &b);
        let got = poly_gcd(&a, &b).map_err(|e| e.to_string())?;
        ensure(got.monic() == expected, || format!("pair {i}: gcd({a}, {b}) = {got}, oracle {expected}"))?;
        // the known g always divides the answer
        ensure(product(&f, &g).divides(&got), || format!("pair {i}: known factor lost"))?;
        if !expected.is_constant() {
            nontrivial += 1;
        }
    }
    Ok(format!("200 pairs of degree <= 6 agree up to units ({nontrivial} with non-constant gcd)"))
}

// ------------------------------------------------------------ criterion 11

fn cli_determinism() -> Check {
    let render = || -> Vec<serde_json::Value> {
        run_corpus(&Options::default())
            .iter()
            .map(|r| {
                let mut v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
                strip_timing(&mut v);
                v
            })
            .collect()
    };
    let (a, b) = (render(), render());
    let (sa, sb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    ensure(sa == sb, || "two corpus runs differ".into())?;
    let other = run_corpus(&Options {
        seed: 1,
        ..Options::default()
    });
    ensure(other.iter().all(|r| r.exit_code == 0), || "corpus fails under seed 1".into())?;
    for (name, src) in CORPUS {
        let s = parse(src).map_err(|e| format!("{name}: {e}"))?;
        let printed = pretty(&s);
        let again = parse(&printed).map_err(|e| format!("{name} reprinted: {e}"))?;
        ensure(again == s && pretty(&again) == printed, || format!("{name}: round trip differs"))?;
    }
    Ok(format!("{} scripts: byte-identical JSON across runs, round trip exact", CORPUS.len()))
}

/// Written to the raw stderr handle so the lines survive libtest's capture.
fn report(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("blow-up eigenvalue law", blowup_eigenvalue_law_check),
        ("strong non-resonance preserved by blow-ups", strong_resonance_preservation),
        ("tangent logarithmic pencils", tangent_log_pencils_check),
        ("ratio identities and normal form II", ratio_identities_check),
        ("pencil condition iff integrable members", pencil_condition_check),
        ("connection form certificate and uniqueness", theta_certificate_check),
        ("classification certificates on the corpus", classification_soundness),
        ("Jouanolou example", jouanolou_check),
        ("codimension-one sampling", codim1_sampling),
        ("gcd against divisor enumeration", gcd_oracle_check),
        ("CLI determinism and round trip", cli_determinism),
    ];
    let mut failed = vec![];
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => report(&format!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1)),
            Err(why) => {
                report(&format!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
