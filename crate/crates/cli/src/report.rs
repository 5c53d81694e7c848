//! Run reports: verdicts, certificates, and their JSON and text renderings.

use foliation_core::{FieldElement, MeroForm, Poly, RatFunc, VectorField};
use serde::Serialize;
use serde_json::{json, Value as Json};

/// Bumped whenever a field is renamed or its meaning changes.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// The JSON schema every report validates against.
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Options {
    pub order: u32,
    pub bound: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            order: 8,
            bound: 50,
            samples: 20,
            seed: 0,
        }
    }
}

/// A named certificate: a human-readable rendering and exact data.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub name: String,
    pub kind: &'static str,
    pub text: String,
    pub data: Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    /// usage, precondition or certificate.
    pub class: &'static str,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub line: usize,
    pub command: String,
    pub verdict: Option<String>,
    /// Scope of a verdict that is only as strong as a search bound.
    pub qualifier: Option<String>,
    pub certificates: Vec<Certificate>,
    pub error: Option<ErrorInfo>,
    pub expect: Option<String>,
    pub matched: Option<bool>,
    pub timing_ms: f64,
}

impl CommandResult {
    /// The verdict as compared against `--expect`.
    pub fn outcome(&self) -> String {
        match (&self.verdict, &self.error) {
            (_, Some(e)) => format!("error:{}", e.kind),
            (Some(v), None) => v.clone(),
            (None, None) => String::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub script: String,
    pub field: String,
    pub nvars: usize,
    pub options: Options,
    pub results: Vec<CommandResult>,
    pub exit_code: i32,
    pub timing_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable report")
    }

    pub fn to_text(&self) -> String {
        let o = &self.options;
        let mut out = format!(
            "script {} over {} in {} variables (order {}, bound {}, samples {}, seed {})\n",
            self.script, self.field, self.nvars, o.order, o.bound, o.samples, o.seed
        );
        for r in &self.results {
            out.push_str(&format!("[{}] {}\n", r.line, r.command));
            if let Some(v) = &r.verdict {
                match &r.qualifier {
                    Some(q) => out.push_str(&format!("  verdict: {v} {q}\n")),
                    None => out.push_str(&format!("  verdict: {v}\n")),
                }
            }
            if let Some(e) = &r.error {
                out.push_str(&format!("  error ({}): {}\n", e.class, e.message));
            }
            for c in &r.certificates {
                out.push_str(&format!("  {}: {}\n", c.name, c.text));
            }
            if let (Some(e), Some(m)) = (&r.expect, r.matched) {
                out.push_str(&format!("  expect {e}: {}\n", if m { "ok" } else { "MISMATCH" }));
            }
        }
        out.push_str(&format!("exit code {}\n", self.exit_code));
        out
    }
}

/// Drops every `timing_ms` member, the only nondeterministic part of a report.
pub fn strip_timing(v: &mut Json) {
    match v {
        Json::Object(m) => {
            m.remove("timing_ms");
            m.values_mut().for_each(strip_timing);
        }
        Json::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

// ---------------------------------------------------------------- encoding

pub fn scalar_json(c: &FieldElement) -> Json {
    Json::Array(c.coords().iter().map(|q| Json::String(q.to_string())).collect())
}

pub fn poly_json(p: &Poly) -> Json {
    let terms: Vec<Json> = p
        .terms()
        .map(|(m, c)| json!({ "exponents": m.exponents(), "coeff": scalar_json(c) }))
        .collect();
    json!({ "nvars": p.nvars(), "terms": terms })
}

pub fn ratfunc_json(f: &RatFunc) -> Json {
    json!({ "num": poly_json(f.num()), "den": poly_json(f.den()) })
}

pub fn form_json(w: &MeroForm) -> Json {
    let terms: Vec<Json> = w
        .terms()
        .map(|(idx, c)| json!({ "index": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "coeff": ratfunc_json(c) }))
        .collect();
    json!({ "degree": w.degree(), "nvars": w.nvars(), "terms": terms })
}

pub fn field_json(x: &VectorField) -> Json {
    json!({ "components": x.components().iter().map(ratfunc_json).collect::<Vec<_>>() })
}

fn show_list<T: std::fmt::Display>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

impl Certificate {
    pub fn scalar(name: &str, c: &FieldElement) -> Self {
        Self::new(name, "scalar", c.to_string(), scalar_json(c))
    }

    pub fn scalars(name: &str, v: &[FieldElement]) -> Self {
        Self::new(name, "scalars", show_list(v), Json::Array(v.iter().map(scalar_json).collect()))
    }

    pub fn poly(name: &str, p: &Poly) -> Self {
        Self::new(name, "polynomial", p.to_string(), poly_json(p))
    }

    pub fn polys(name: &str, v: &[Poly]) -> Self {
        Self::new(name, "polynomials", show_list(v), Json::Array(v.iter().map(poly_json).collect()))
    }

    pub fn func(name: &str, f: &RatFunc) -> Self {
        Self::new(name, "function", f.to_string(), ratfunc_json(f))
    }

    pub fn form(name: &str, w: &MeroForm) -> Self {
        Self::new(name, "form", w.to_string(), form_json(w))
    }

    pub fn field(name: &str, x: &VectorField) -> Self {
        Self::new(name, "vector_field", x.to_string(), field_json(x))
    }

    pub fn boolean(name: &str, b: bool) -> Self {
        Self::new(name, "boolean", b.to_string(), Json::Bool(b))
    }

    pub fn integers(name: &str, v: &[i64]) -> Self {
        Self::new(name, "integers", show_list(v), json!(v))
    }

    pub fn integer(name: &str, n: i64) -> Self {
        Self::new(name, "integer", n.to_string(), json!(n))
    }

    pub fn text(name: &str, s: impl Into<String>) -> Self {
        let s = s.into();
        Self::new(name, "text", s.clone(), Json::String(s))
    }

    fn new(name: &str, kind: &'static str, text: String, data: Json) -> Self {
        Certificate {
            name: name.to_string(),
            kind,
            text,
            data,
        }
    }
}
