//! Script execution: one handler per command, each producing a verdict with
//! its certificates.

use std::time::Instant;

use foliation_core::pencil::random_parameters;
use foliation_core::{
    blowup_eigenvalue_law, codim1_sample, connection_form_with, diagonal_linear_part, directional_derivative,
    ext_derivative, interior_product, invariant_hypersurface_check, invariant_hypersurface_search, is_first_integral,
    is_integrable, is_strongly_diagonalizable, is_tangent, jouanolou, log_pencil, nonneg_resonance_search,
    pencil_condition, pencil_from_three, ratio_identities, recognize_normal_form, remove_codim1, simple_ch_check,
    strong_resonances, tangent_log_pencil, transform_form, transform_vector_field, verify_classification, wedge,
    BlowupChart, Eigenvalues, Error as CoreError, ErrorClass, FieldElement, MeroForm, Pencil, PencilClassification,
    SimpleSingularityReport, VectorField, YChoice,
};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eval::{type_error, EResult, Env, EvalError, Value};
use crate::report::{Certificate, CommandResult, ErrorInfo, Options, Report, SCHEMA_VERSION};
use crate::script::{format_expr, format_stmt, Arg, FieldDecl, FlagValue, Script, Stmt};

/// Lemma-style cap on exceptional parameters among sampled pencil members.
pub const EXCEPTIONAL_CAP: usize = 2;

/// Default degree cap of `surface-search`.
pub const SURFACE_CAP: u32 = 2;

/// Exit codes.
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_EXPECT: i32 = 4;

struct Outcome {
    verdict: String,
    qualifier: Option<String>,
    certificates: Vec<Certificate>,
}

impl Outcome {
    fn new(verdict: impl Into<String>) -> Self {
        Outcome {
            verdict: verdict.into(),
            qualifier: None,
            certificates: vec![],
        }
    }

    fn cert(mut self, c: Certificate) -> Self {
        self.certificates.push(c);
        self
    }

    fn qualified(mut self, q: impl Into<String>) -> Self {
        self.qualifier = Some(q.into());
        self
    }
}

/// Positional arguments and flags of one command invocation.
struct Call<'a> {
    positional: Vec<Value>,
    flags: Vec<(&'a str, Option<&'a FlagValue>)>,
}

impl Call<'_> {
    fn has(&self, flag: &str) -> bool {
        self.flags.iter().any(|(f, _)| *f == flag)
    }

    fn int(&self, flag: &str) -> EResult<Option<u64>> {
        match self.flags.iter().find(|(f, _)| *f == flag) {
            None => Ok(None),
            Some((_, Some(FlagValue::Int(n)))) => match n.to_u64() {
                Some(v) => Ok(Some(v)),
                None => type_error(format!("--{flag} value out of range")),
            },
            Some(_) => type_error(format!("--{flag} needs an integer")),
        }
    }
}

fn flag_text(v: &FlagValue) -> String {
    match v {
        FlagValue::Int(n) => n.to_string(),
        FlagValue::Str(s) | FlagValue::Name(s) => s.clone(),
    }
}

fn error_kind(e: &CoreError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn error_info(e: &EvalError) -> ErrorInfo {
    match e {
        EvalError::Type(m) => ErrorInfo {
            class: "usage",
            kind: "TypeError".into(),
            message: m.clone(),
        },
        EvalError::Core(c) => ErrorInfo {
            class: match c.class() {
                ErrorClass::Certificate => "certificate",
                ErrorClass::Precondition => "precondition",
            },
            kind: error_kind(c),
            message: c.to_string(),
        },
    }
}

fn exit_code_of(e: &ErrorInfo) -> i32 {
    match e.class {
        "certificate" => EXIT_CERTIFICATE,
        "precondition" => EXIT_PRECONDITION,
        _ => EXIT_USAGE,
    }
}

/// Combines exit codes: certificate failures dominate, then expectation
/// mismatches, then precondition and usage errors.
pub fn worse(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        EXIT_CERTIFICATE => 4,
        EXIT_EXPECT => 3,
        EXIT_PRECONDITION => 2,
        EXIT_USAGE => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn millis(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn certificate_failure(msg: impl Into<String>) -> EvalError {
    EvalError::Core(CoreError::CertificateFailure(msg.into()))
}

pub fn field_description(script: &Script) -> String {
    match &script.field {
        Some(FieldDecl::Extension { generator, minpoly }) => format!("Q[{generator}]/({})", format_expr(minpoly)),
        _ => "Q".into(),
    }
}

/// Executes scripts; pencils built along the way are kept for inspection.
pub struct Runner {
    pub options: Options,
    pub pencils: Vec<(usize, Pencil)>,
    rng: ChaCha8Rng,
}

impl Runner {
    pub fn new(options: Options) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(options.seed);
        Runner {
            options,
            pencils: vec![],
            rng,
        }
    }

    pub fn run(&mut self, name: &str, script: &Script) -> Report {
        let start = Instant::now();
        let mut results = vec![];
        let mut exit = 0;
        let mut env = match Env::new(script) {
            Ok(env) => env,
            Err(e) => {
                let info = error_info(&e);
                exit = exit_code_of(&info);
                results.push(CommandResult {
                    line: 1,
                    command: "field".into(),
                    verdict: None,
                    qualifier: None,
                    certificates: vec![],
                    error: Some(info),
                    expect: None,
                    matched: None,
                    timing_ms: 0.0,
                });
                return self.report(name, script, results, exit, start);
            }
        };
        for (stmt, &line) in script.statements.iter().zip(&script.lines) {
            let t = Instant::now();
            match stmt {
                Stmt::Let { name, expr } => match env.eval(expr) {
                    Ok(v) => {
                        env.bindings.insert(name.clone(), v);
                    }
                    Err(e) => {
                        // later statements may depend on the binding: stop here
                        let info = error_info(&e);
                        exit = worse(exit, exit_code_of(&info));
                        results.push(CommandResult {
                            line,
                            command: format_stmt(stmt),
                            verdict: None,
                            qualifier: None,
                            certificates: vec![],
                            error: Some(info),
                            expect: None,
                            matched: None,
                            timing_ms: millis(t),
                        });
                        break;
                    }
                },
                Stmt::Command { name, args } => {
                    let expect = args.iter().find_map(|a| match a {
                        Arg::Flag(f, Some(v)) if f == "expect" => Some(flag_text(v)),
                        _ => None,
                    });
                    let outcome = self.command(&env, line, name, args);
                    let mut r = CommandResult {
                        line,
                        command: format_stmt(stmt),
                        verdict: None,
                        qualifier: None,
                        certificates: vec![],
                        error: None,
                        expect: expect.clone(),
                        matched: None,
                        timing_ms: 0.0,
                    };
                    match outcome {
                        Ok(o) => {
                            r.verdict = Some(o.verdict);
                            r.qualifier = o.qualifier;
                            r.certificates = o.certificates;
                        }
                        Err(e) => r.error = Some(error_info(&e)),
                    }
                    if let Some(e) = &expect {
                        r.matched = Some(r.outcome() == *e);
                    }
                    let code = match (&r.error, r.matched) {
                        (Some(e), _) if e.class == "certificate" => EXIT_CERTIFICATE,
                        (_, Some(false)) => EXIT_EXPECT,
                        (Some(_), Some(true)) => 0,
                        (Some(e), None) => exit_code_of(e),
                        _ => 0,
                    };
                    exit = worse(exit, code);
                    r.timing_ms = millis(t);
                    results.push(r);
                }
            }
        }
        self.report(name, script, results, exit, start)
    }

    fn report(&self, name: &str, script: &Script, results: Vec<CommandResult>, exit: i32, start: Instant) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            script: name.to_string(),
            field: field_description(script),
            nvars: script.nvars,
            options: self.options.clone(),
            results,
            exit_code: exit,
            timing_ms: millis(start),
        }
    }

    fn command(&mut self, env: &Env, line: usize, name: &str, args: &[Arg]) -> EResult<Outcome> {
        let mut positional = vec![];
        let mut flags = vec![];
        for a in args {
            match a {
                Arg::Expr(e) => positional.push(env.eval(e)?),
                Arg::Flag(f, v) => flags.push((f.as_str(), v.as_ref())),
            }
        }
        let call = Call { positional, flags };
        let p = &call.positional;
        let samples = call.int("samples")?.map_or(self.options.samples, |v| v as usize);
        let bound = call.int("bound")?.unwrap_or(self.options.bound);
        let order = call.int("order")?.map_or(self.options.order, |v| v as u32);
        match name {
            "check-tangent" => {
                let x = p[0].as_field()?;
                let w = p[1].as_form()?;
                let c = interior_product(x, &w)?;
                Ok(Outcome::new(is_tangent(x, &w)?.to_string()).cert(Certificate::form("contraction", &c)))
            }
            "check-integrable" => {
                let w = p[0].as_one_form()?;
                let c = wedge(&w, &ext_derivative(&w))?;
                Ok(Outcome::new(is_integrable(&w).to_string()).cert(Certificate::form("w ^^ dw", &c)))
            }
            "remove-codim1" => {
                let (w, g) = remove_codim1(&p[0].as_one_form()?)?;
                let verdict = if g.is_constant() { "no codim-1 factor" } else { "codim-1 factor removed" };
                Ok(Outcome::new(verdict).cert(Certificate::poly("factor", &g)).cert(Certificate::form("reduced", &w)))
            }
            "resonance" => self.resonance(&call, bound),
            "blowup" => self.blowup(&call),
            "pencil-check" => self.pencil_check(&call, samples),
            "pencil-from-three" => {
                let ws: Vec<MeroForm> = p[..3].iter().map(Value::as_one_form).collect::<EResult<_>>()?;
                let eta = p[3].as_form()?;
                let pencil = pencil_from_three(&ws[0], &ws[1], &ws[2], &eta)?;
                let o = Outcome::new("pencil")
                    .cert(Certificate::form("gen1", pencil.gen1()))
                    .cert(Certificate::form("gen2", pencil.gen2()));
                self.pencils.push((line, pencil));
                Ok(o)
            }
            "pencil-theta" => {
                let pencil = self.pencil(line, p)?;
                self.theta(&pencil, samples)
            }
            "pencil-curvature" => {
                let pencil = self.pencil(line, p)?;
                let alpha = pencil.curvature_factor()?;
                let verdict = if alpha.is_zero() { "flat" } else { "curved" };
                Ok(Outcome::new(verdict)
                    .cert(Certificate::form("curvature", pencil.curvature()))
                    .cert(Certificate::func("alpha", &alpha)))
            }
            "pencil-classify" => {
                let pencil = self.pencil(line, p)?;
                classify(&pencil)
            }
            "pencil-sample" => {
                let pencil = self.pencil(line, p)?;
                let s = codim1_sample(&pencil, samples, &mut self.rng)?;
                let mut o = Outcome::new(format!("{} exceptional", s.exceptional.len()))
                    .qualified(format!("among {samples} random parameters"))
                    .cert(Certificate::integer("cap", EXCEPTIONAL_CAP as i64))
                    .cert(Certificate::boolean("within cap", s.exceptional.len() <= EXCEPTIONAL_CAP));
                for (a, b, g) in &s.exceptional {
                    o = o.cert(Certificate::poly(&format!("locus at ({a}, {b})"), g));
                }
                Ok(o)
            }
            "log-pencil" => self.log_pencil(line, p, samples),
            "normal-form" => {
                let w = p[0].as_one_form()?;
                let a = Eigenvalues::new(p[1].as_constants()?)?;
                let r = recognize_normal_form(&w, &a, order, bound)?;
                Ok(singularity_outcome(&r, bound, false))
            }
            "ch-check" => {
                let r = simple_ch_check(&p[0].as_one_form()?, bound)?;
                Ok(singularity_outcome(&r, bound, true))
            }
            "jouanolou" => {
                let (x, w) = jouanolou(p[0].as_u32()?)?;
                let r = VectorField::radial(x.field(), x.nvars());
                let ix = interior_product(&x, &w)?;
                let ir = interior_product(&r, &w)?;
                let int = wedge(&w, &ext_derivative(&w))?;
                if !(ix.is_zero() && ir.is_zero() && int.is_zero()) {
                    return Err(certificate_failure("Jouanolou identities fail"));
                }
                Ok(Outcome::new("verified")
                    .cert(Certificate::field("X", &x))
                    .cert(Certificate::form("w", &w))
                    .cert(Certificate::form("i_X w", &ix))
                    .cert(Certificate::form("i_R w", &ir))
                    .cert(Certificate::form("w ^^ dw", &int)))
            }
            "first-integral" => {
                let x = p[0].as_field()?;
                let f = p[1].as_func()?;
                let v = is_first_integral(x, f)?;
                let o = Outcome::new(v.holds.to_string()).cert(Certificate::func("X(f)", &directional_derivative(x, f)?));
                Ok(if v.degenerate { o.qualified("(constant candidate)") } else { o })
            }
            "surface-check" => {
                let x = p[0].as_field()?;
                let f = p[1].as_poly()?;
                let holds = invariant_hypersurface_check(x, &f)?;
                let xf = x.apply_poly(&f)?;
                let mut o = Outcome::new(holds.to_string()).cert(Certificate::poly("X(f)", &xf));
                if let Some(g) = xf.exact_div(&f) {
                    o = o.cert(Certificate::poly("cofactor", &g));
                }
                Ok(o)
            }
            "surface-search" => {
                let x = p[0].as_field()?;
                let cap = call.int("cap")?.map_or(SURFACE_CAP, |v| v as u32);
                let s = invariant_hypersurface_search(x, cap)?;
                let qualifier = if s.complete {
                    format!("(complete for homogeneous surfaces up to degree {cap})")
                } else {
                    format!("(search up to degree {cap} may be incomplete)")
                };
                let mut o = Outcome::new(format!("{} found", s.surfaces.len()))
                    .qualified(qualifier)
                    .cert(Certificate::boolean("complete", s.complete));
                for (i, f) in s.surfaces.iter().enumerate() {
                    o = o
                        .cert(Certificate::poly(&format!("surface {}", i + 1), &f.f))
                        .cert(Certificate::poly(&format!("cofactor {}", i + 1), &f.cofactor))
                        .cert(Certificate::boolean(&format!("first integral {}", i + 1), f.first_integral));
                }
                Ok(o)
            }
            _ => type_error(format!("unknown command `{name}`")),
        }
    }

    fn pencil(&mut self, line: usize, p: &[Value]) -> EResult<Pencil> {
        let pencil = Pencil::new(p[0].as_one_form()?, p[1].as_one_form()?)?;
        self.pencils.push((line, pencil.clone()));
        Ok(pencil)
    }

    fn random_pair(&mut self, pencil: &Pencil) -> (i64, i64, MeroForm) {
        loop {
            let (a, b) = random_parameters(&mut self.rng);
            let f = pencil.field();
            // the raw combination: dividing out a common factor changes theta
            if let Ok(w) = pencil.raw_member(&FieldElement::from_int(f, a), &FieldElement::from_int(f, b)) {
                return (a, b, w);
            }
        }
    }

    fn resonance(&mut self, call: &Call, bound: u64) -> EResult<Outcome> {
        let a = Eigenvalues::new(call.positional[0].as_constants()?)?;
        if call.has("nonneg") {
            let r = nonneg_resonance_search(&a, bound)?;
            return Ok(match &r.relation {
                Some(m) => Outcome::new("resonant").cert(Certificate::integers("relation", m)),
                None if r.exact => Outcome::new("no resonance")
                    .qualified("(for every bound)")
                    .cert(Certificate::integer("bound", bound as i64)),
                None => Outcome::new("no resonance")
                    .qualified(format!("up to bound {bound}"))
                    .cert(Certificate::integer("bound", bound as i64)),
            });
        }
        let lattice = strong_resonances(&a)?;
        let verdict = if lattice.is_empty() { "strongly non-resonant" } else { "strongly resonant" };
        let mut o = Outcome::new(verdict).cert(Certificate::integer("rank", lattice.rank() as i64));
        for (i, rel) in lattice.relations.iter().enumerate() {
            let text: Vec<String> = rel.iter().map(|x| x.to_string()).collect();
            let ints: Option<Vec<i64>> = rel.iter().map(|x| x.to_i64()).collect();
            o = o.cert(match ints {
                Some(v) => Certificate::integers(&format!("relation {}", i + 1), &v),
                None => Certificate::text(&format!("relation {}", i + 1), format!("[{}]", text.join(", "))),
            });
        }
        Ok(o)
    }

    fn blowup(&mut self, call: &Call) -> EResult<Outcome> {
        let target = &call.positional[0];
        let n = match target {
            Value::List(v) => v.len(),
            Value::Field(x) => x.nvars(),
            Value::Form(w) => w.nvars(),
            Value::Func(_) => return type_error("blowup applies to eigenvalue lists, vector fields and 1-forms"),
        };
        let index = |flag: &str| -> EResult<Option<usize>> {
            match call.int(flag)? {
                None => Ok(None),
                Some(0) => type_error(format!("--{flag} counts from 1")),
                Some(k) => Ok(Some(k as usize - 1)),
            }
        };
        let chart = index("chart")?;
        let charts: Vec<BlowupChart> = if call.has("monoidal") {
            let Some(axis) = index("axis")? else {
                return type_error("--monoidal needs --axis");
            };
            match chart {
                Some(chart) => vec![BlowupChart::Monoidal { axis, chart }],
                None => (0..n).filter(|&k| k != axis).map(|chart| BlowupChart::Monoidal { axis, chart }).collect(),
            }
        } else {
            match chart {
                Some(chart) => vec![BlowupChart::Punctual { chart }],
                None => (0..n).map(|chart| BlowupChart::Punctual { chart }).collect(),
            }
        };
        let label = |c: &BlowupChart| match *c {
            BlowupChart::Punctual { chart } => format!("chart x{}", chart + 1),
            BlowupChart::Monoidal { axis, chart } => format!("axis x{} chart x{}", axis + 1, chart + 1),
        };
        let mut certs = vec![];
        let mut flagged = false;
        let verdict = match target {
            Value::List(_) => {
                let a = Eigenvalues::new(target.as_constants()?)?;
                let mut last = String::new();
                for c in &charts {
                    let b = blowup_eigenvalue_law(&a, c)?;
                    flagged |= !is_strongly_diagonalizable(&b);
                    let cert = Certificate::scalars(&format!("{} eigenvalues", label(c)), b.values());
                    last = cert.text.clone();
                    certs.push(cert);
                }
                // one chart: the transformed eigenvalues themselves
                if charts.len() == 1 {
                    return Ok(Outcome {
                        verdict: last,
                        qualifier: None,
                        certificates: certs,
                    });
                }
                if flagged {
                    "strongly resonant"
                } else {
                    "strongly non-resonant"
                }
            }
            Value::Field(x) => {
                for c in &charts {
                    let t = transform_vector_field(x, c)?;
                    flagged |= t.dicritical;
                    certs.push(Certificate::field(&label(c), &t.object));
                    certs.push(Certificate::integer(
                        &format!("{} multiplicity", label(c)),
                        t.exceptional_multiplicity as i64,
                    ));
                    if let Some(ev) = diagonal_linear_part(&t.object)? {
                        certs.push(Certificate::scalars(&format!("{} eigenvalues", label(c)), &ev));
                    }
                }
                if flagged {
                    "dicritical"
                } else {
                    "non-dicritical"
                }
            }
            Value::Form(w) => {
                if w.degree() != 1 {
                    return Err(CoreError::WrongDegree {
                        expected: 1,
                        found: w.degree(),
                    }
                    .into());
                }
                for c in &charts {
                    let t = transform_form(w, c)?;
                    flagged |= t.dicritical;
                    certs.push(Certificate::form(&label(c), &t.object));
                    certs.push(Certificate::integer(
                        &format!("{} multiplicity", label(c)),
                        t.exceptional_multiplicity as i64,
                    ));
                }
                if flagged {
                    "dicritical"
                } else {
                    "non-dicritical"
                }
            }
            Value::Func(_) => unreachable!(),
        };
        Ok(Outcome {
            verdict: verdict.into(),
            qualifier: None,
            certificates: certs,
        })
    }

    fn pencil_check(&mut self, call: &Call, samples: usize) -> EResult<Outcome> {
        let w1 = call.positional[0].as_one_form()?;
        let w2 = call.positional[1].as_one_form()?;
        let holds = pencil_condition(&w1, &w2)?;
        let condition = wedge(&w1, &ext_derivative(&w2))?.add(&wedge(&w2, &ext_derivative(&w1))?);
        let f = w1.field().clone();
        let mut integrable = 0;
        let mut failing = None;
        for _ in 0..samples {
            let (a, b) = random_parameters(&mut self.rng);
            let w = w1.scale_const(&FieldElement::from_int(&f, a)).add(&w2.scale_const(&FieldElement::from_int(&f, b)));
            if is_integrable(&w) {
                integrable += 1;
            } else if failing.is_none() {
                failing = Some((a, b));
            }
        }
        let generators = is_integrable(&w1) && is_integrable(&w2);
        let mut o = Outcome::new(holds.to_string())
            .cert(Certificate::form("w1 ^^ dw2 + w2 ^^ dw1", &condition))
            .cert(Certificate::boolean("generators integrable", generators))
            .cert(Certificate::text("integrable members", format!("{integrable} of {samples}")));
        if let Some((a, b)) = failing {
            o = o.cert(Certificate::integers("non-integrable member", &[a, b]));
        }
        if holds && generators && integrable != samples {
            return Err(certificate_failure("a member of a pencil is not integrable"));
        }
        Ok(o)
    }

    fn theta(&mut self, pencil: &Pencil, samples: usize) -> EResult<Outcome> {
        let theta = pencil.connection_form();
        let other = connection_form_with(pencil.gen1(), pencil.gen2(), YChoice::Last)?;
        if other != *theta {
            return Err(certificate_failure("connection forms from two Y-choices differ"));
        }
        for _ in 0..samples {
            let (a, b, w) = self.random_pair(pencil);
            if ext_derivative(&w) != wedge(theta, &w)? {
                return Err(certificate_failure(format!("dw != theta ^^ w for member ({a}, {b})")));
            }
        }
        Ok(Outcome::new("verified")
            .cert(Certificate::form("theta", theta))
            .cert(Certificate::boolean("unique", true))
            .cert(Certificate::text("members checked", samples.to_string())))
    }

    fn log_pencil(&mut self, line: usize, p: &[Value], samples: usize) -> EResult<Outcome> {
        let mut o = Outcome::new("pencil");
        let pencil = if p.len() == 1 {
            let a = Eigenvalues::new(p[0].as_constants()?)?;
            let t = tangent_log_pencil(&a)?;
            let x = VectorField::diagonal(a.values())?;
            for i in 0..samples {
                let (_, _, w) = self.random_pair(&t.pencil);
                if !is_tangent(&x, &w)? {
                    return Err(certificate_failure(format!("sampled member {} is not tangent", i + 1)));
                }
            }
            for g in [t.pencil.gen1(), t.pencil.gen2()] {
                if !ratio_identities(g, &a)? {
                    return Err(certificate_failure("bX(a) - aX(b) identities fail"));
                }
            }
            o = o
                .cert(Certificate::scalars("residues 1", &t.residues[0]))
                .cert(Certificate::scalars("residues 2", &t.residues[1]))
                .cert(Certificate::text("tangent members", format!("{samples} of {samples}")))
                .cert(Certificate::boolean("ratio identities", true));
            t.pencil
        } else {
            let fs = p[0].as_polys()?;
            log_pencil(&fs, &p[1].as_constants()?, &p[2].as_constants()?)?
        };
        o = o
            .cert(Certificate::form("gen1", pencil.gen1()))
            .cert(Certificate::form("gen2", pencil.gen2()))
            .cert(Certificate::form("theta", pencil.connection_form()))
            .cert(Certificate::form("axis", &pencil.axis_2form()));
        self.pencils.push((line, pencil));
        Ok(o)
    }
}

fn classify(pencil: &Pencil) -> EResult<Outcome> {
    let c = pencil.classify()?;
    verify_classification(pencil, &c)?;
    let mut o = Outcome::new(c.name());
    match &c {
        PencilClassification::FlatHolomorphicFirstIntegral { theta, potential } => {
            o = o.cert(Certificate::form("theta", theta)).cert(Certificate::poly("potential", potential));
        }
        PencilClassification::FlatMeromorphic { theta, polar } => {
            o = o
                .cert(Certificate::form("theta", theta))
                .cert(Certificate::form("d(theta)", &ext_derivative(theta)))
                .cert(Certificate::poly("polar", polar));
        }
        PencilClassification::ConstantCurvatureFactor {
            alpha,
            mu1,
            mu2,
            axis_first_integral,
            closed_member,
        } => {
            o = o
                .cert(Certificate::scalar("alpha", alpha))
                .cert(Certificate::func("mu1", mu1))
                .cert(Certificate::func("mu2", mu2));
            if let Some(phi) = axis_first_integral {
                o = o.cert(Certificate::func("axis first integral", phi));
            }
            if let Some(w) = closed_member {
                o = o.cert(Certificate::form("closed member", w));
            }
        }
        PencilClassification::NonconstantCurvatureFactor {
            alpha,
            k1,
            k2,
            axis_first_integral,
        } => {
            o = o
                .cert(Certificate::func("alpha", alpha))
                .cert(Certificate::func("k1", k1))
                .cert(Certificate::func("k2", k2))
                .cert(Certificate::func("axis first integral", axis_first_integral));
        }
    }
    if let Some(phi) = c.axis_first_integral() {
        let dphi = ext_derivative(&MeroForm::function(phi.clone()));
        let check = wedge(&wedge(&dphi, pencil.gen1())?, pencil.gen2())?;
        o = o.cert(Certificate::form("dPhi ^^ w1 ^^ w2", &check));
    }
    Ok(o)
}

fn singularity_outcome(r: &SimpleSingularityReport, bound: u64, ch: bool) -> Outcome {
    let Some(nf) = r.normal_form else {
        let o = Outcome::new("no match");
        return match r.order {
            Some(n) => o.qualified(format!("at order {n}")),
            None => o.qualified("in the given coordinates"),
        };
    };
    let verdict = if ch { ch_verdict(r).to_string() } else { format!("form {}", nf.name()) };
    let mut o = Outcome::new(verdict)
        .cert(Certificate::text("normal form", nf.name()))
        .cert(Certificate::integers("variables", &r.variables.iter().map(|&i| i as i64 + 1).collect::<Vec<_>>()))
        .cert(Certificate::scalars("residues", &r.residues))
        .cert(Certificate::boolean("complex hyperbolic", r.complex_hyperbolic));
    if let Some(u) = &r.unit {
        o = o.cert(Certificate::poly("unit", u));
    }
    if let Some(n) = r.order {
        o = o.qualified(format!("at order {n}"));
    }
    if let Some(res) = &r.resonance {
        match &res.relation {
            Some(m) => o = o.cert(Certificate::integers("resonance", m)),
            None if !res.exact => {
                let q = o.qualifier.take().map_or(String::new(), |q| format!("{q}, "));
                o = o.qualified(format!("{q}no resonance up to bound {bound}"));
            }
            None => {}
        }
    }
    o
}

fn ch_verdict(r: &SimpleSingularityReport) -> &'static str {
    match (r.normal_form, r.complex_hyperbolic) {
        (None, _) => "no match",
        (Some(_), true) => "complex hyperbolic",
        (Some(_), false) => "not complex hyperbolic",
    }
}
