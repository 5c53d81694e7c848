//! Python bindings. Objects are built by parsing script expressions inside a
//! `Context`, which fixes the number field and the ambient dimension.

use foliation_cli::corpus::run_source;
use foliation_cli::eval::{Env, EvalError, Value};
use foliation_cli::report::Options;
use foliation_cli::run::field_description;
use foliation_cli::script::{parse, Stmt};
use foliation_core as core;
use foliation_core::{ErrorClass, FieldElement, MeroForm, RatFunc};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyTypeError, PyValueError};
use pyo3::prelude::*;

create_exception!(foliation_kit, PreconditionError, PyException);
create_exception!(foliation_kit, CertificateError, PyException);

fn core_err(e: core::Error) -> PyErr {
    match e.class() {
        ErrorClass::Certificate => CertificateError::new_err(e.to_string()),
        ErrorClass::Precondition => PreconditionError::new_err(e.to_string()),
    }
}

fn eval_err(e: EvalError) -> PyErr {
    match e {
        EvalError::Type(m) => PyTypeError::new_err(m),
        EvalError::Core(c) => core_err(c),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(core_err)
    }
}

#[pyclass(name = "Func", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyFunc(RatFunc);

#[pyclass(name = "Form", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyForm(MeroForm);

#[pyclass(name = "VectorField", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyField(core::VectorField);

#[pyclass(name = "Pencil", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPencil(core::Pencil);

fn to_py(py: Python<'_>, v: Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Func(f) => Py::new(py, PyFunc(f))?.into_any(),
        Value::Form(w) => Py::new(py, PyForm(w))?.into_any(),
        Value::Field(x) => Py::new(py, PyField(x))?.into_any(),
        Value::List(items) => {
            let objs = items.into_iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            pyo3::types::PyList::new(py, objs)?.into_any().unbind()
        }
    })
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    if let Ok(f) = obj.cast::<PyFunc>() {
        return Ok(Value::Func(f.get().0.clone()));
    }
    if let Ok(w) = obj.cast::<PyForm>() {
        return Ok(Value::Form(w.get().0.clone()));
    }
    if let Ok(x) = obj.cast::<PyField>() {
        return Ok(Value::Field(x.get().0.clone()));
    }
    if let Ok(items) = obj.extract::<Vec<Bound<'_, PyAny>>>() {
        return Ok(Value::List(items.iter().map(from_py).collect::<PyResult<_>>()?));
    }
    Err(PyTypeError::new_err("expected Func, Form, VectorField or a list of them"))
}

fn constants(values: &[PyRef<'_, PyFunc>]) -> PyResult<Vec<FieldElement>> {
    values
        .iter()
        .map(|f| {
            f.0.as_constant()
                .ok_or_else(|| PyTypeError::new_err(format!("eigenvalue `{}` is not a constant", f.0)))
        })
        .collect()
}

fn eigenvalues(values: &[PyRef<'_, PyFunc>]) -> PyResult<core::Eigenvalues> {
    core::Eigenvalues::new(constants(values)?).py()
}

fn chart(axis: Option<usize>, chart: usize) -> core::BlowupChart {
    match axis {
        None => core::BlowupChart::Punctual { chart },
        Some(axis) => core::BlowupChart::Monoidal { axis, chart },
    }
}

/// Number field and dimension in which expressions are read.
///
/// `field` is None for Q, or `"t: t^2 - 2"` style: a generator name and
/// its minimal polynomial.
#[pyclass(name = "Context")]
pub struct PyContext {
    header: String,
    description: String,
    env: Env,
}

#[pymethods]
impl PyContext {
    #[new]
    #[pyo3(signature = (field=None, nvars=3))]
    fn new(field: Option<&str>, nvars: usize) -> PyResult<Self> {
        let header = match field {
            None => "field Q;".to_string(),
            Some(f) => format!("field {f};"),
        };
        let mut script = parse(&header).map_err(|e| PyValueError::new_err(e.to_string()))?;
        script.nvars = nvars;
        let env = Env::new(&script).map_err(eval_err)?;
        Ok(PyContext {
            header,
            description: field_description(&script),
            env,
        })
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.env.nvars
    }

    #[getter]
    fn field(&self) -> String {
        self.description.clone()
    }

    /// Evaluates one expression of the script language.
    fn parse(&self, py: Python<'_>, expr: &str) -> PyResult<Py<PyAny>> {
        let src = format!("{}\nlet _ = {expr};", self.header);
        let script = parse(&src).map_err(|e| PyValueError::new_err(e.to_string()))?;
        if script.nvars > self.env.nvars {
            return Err(PyValueError::new_err(format!(
                "expression uses {} variables, context has {}",
                script.nvars, self.env.nvars
            )));
        }
        let Some(Stmt::Let { expr, .. }) = script.statements.last() else {
            return Err(PyValueError::new_err("expected a single expression"));
        };
        to_py(py, self.env.eval(expr).map_err(eval_err)?)
    }

    /// Makes `name` available to later `parse` calls.
    fn bind(&mut self, name: &str, value: &Bound<'_, PyAny>) -> PyResult<()> {
        self.env.bindings.insert(name.to_string(), from_py(value)?);
        Ok(())
    }

    fn __repr__(&self) -> String {
        format!("Context({}, nvars={})", self.description, self.env.nvars)
    }
}

#[pymethods]
impl PyFunc {
    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Func({})", self.0)
    }

    fn __add__(&self, o: &PyFunc) -> PyResult<PyFunc> {
        self.0.compatible(&o.0).py()?;
        Ok(PyFunc(self.0.add(&o.0)))
    }

    fn __sub__(&self, o: &PyFunc) -> PyResult<PyFunc> {
        self.0.compatible(&o.0).py()?;
        Ok(PyFunc(self.0.sub(&o.0)))
    }

    fn __mul__(&self, o: &PyFunc) -> PyResult<PyFunc> {
        self.0.compatible(&o.0).py()?;
        Ok(PyFunc(self.0.mul(&o.0)))
    }

    fn __truediv__(&self, o: &PyFunc) -> PyResult<PyFunc> {
        Ok(PyFunc(self.0.div(&o.0).py()?))
    }

    fn __neg__(&self) -> PyFunc {
        PyFunc(self.0.neg())
    }

    fn __pow__(&self, e: i32, _modulo: Option<Py<PyAny>>) -> PyResult<PyFunc> {
        Ok(PyFunc(self.0.pow(e).py()?))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    fn is_polynomial(&self) -> bool {
        self.0.is_polynomial()
    }

    /// Rational coordinates of a constant in the power basis of the field.
    fn coords(&self) -> PyResult<Vec<String>> {
        let c = self
            .0
            .as_constant()
            .ok_or_else(|| PyTypeError::new_err("not a constant"))?;
        Ok(c.coords().iter().map(|q| q.to_string()).collect())
    }

    fn d(&self) -> PyForm {
        PyForm(core::ext_derivative(&MeroForm::function(self.0.clone())))
    }

    fn gcd(&self, o: &PyFunc) -> PyResult<PyFunc> {
        let (Some(p), Some(q)) = (self.0.as_poly(), o.0.as_poly()) else {
            return Err(PyTypeError::new_err("gcd needs polynomials"));
        };
        let g = core::poly_gcd(p, q).py()?;
        Ok(PyFunc(RatFunc::from_poly(g)))
    }
}

#[pymethods]
impl PyForm {
    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Form({})", self.0)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.0.nvars()
    }

    fn __add__(&self, o: &PyForm) -> PyResult<PyForm> {
        Ok(PyForm(self.0.checked_add(&o.0).py()?))
    }

    fn __sub__(&self, o: &PyForm) -> PyResult<PyForm> {
        Ok(PyForm(self.0.checked_add(&o.0.neg()).py()?))
    }

    fn __neg__(&self) -> PyForm {
        PyForm(self.0.neg())
    }

    /// Scaling by a function.
    fn __mul__(&self, f: &PyFunc) -> PyForm {
        PyForm(self.0.scale(&f.0))
    }

    fn __rmul__(&self, f: &PyFunc) -> PyForm {
        PyForm(self.0.scale(&f.0))
    }

    /// `a ^ b` is the wedge product.
    fn __xor__(&self, o: &PyForm) -> PyResult<PyForm> {
        self.wedge(o)
    }

    fn wedge(&self, o: &PyForm) -> PyResult<PyForm> {
        Ok(PyForm(core::wedge(&self.0, &o.0).py()?))
    }

    fn d(&self) -> PyForm {
        PyForm(core::ext_derivative(&self.0))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_integrable(&self) -> bool {
        core::is_integrable(&self.0)
    }

    /// Coefficient of dx_{i1} ^ ... ^ dx_{ik}, indices from 1.
    fn coefficient(&self, index: Vec<usize>) -> PyResult<PyFunc> {
        if index.iter().any(|&i| i == 0 || i > self.0.nvars()) {
            return Err(PyValueError::new_err("indices run from 1 to nvars"));
        }
        let idx: Vec<usize> = index.iter().map(|i| i - 1).collect();
        Ok(PyFunc(self.0.coefficient(&idx)))
    }

    /// Returns (w / h, h) with h the gcd of the coefficients.
    fn remove_codim1(&self) -> PyResult<(PyForm, PyFunc)> {
        let (w, h) = core::remove_codim1(&self.0).py()?;
        Ok((PyForm(w), PyFunc(RatFunc::from_poly(h))))
    }

    /// Strict transform under a blow-up chart (indices from 1); returns the
    /// form, the exceptional multiplicity and whether the chart is dicritical.
    #[pyo3(signature = (chart, axis=None))]
    fn blowup(&self, chart: usize, axis: Option<usize>) -> PyResult<(PyForm, i32, bool)> {
        let c = chart_from_user(chart, axis)?;
        let t = core::transform_form(&self.0, &c).py()?;
        Ok((PyForm(t.object), t.exceptional_multiplicity, t.dicritical))
    }
}

fn chart_from_user(chart_1: usize, axis_1: Option<usize>) -> PyResult<core::BlowupChart> {
    if chart_1 == 0 || axis_1 == Some(0) {
        return Err(PyValueError::new_err("chart and axis indices run from 1"));
    }
    Ok(chart(axis_1.map(|a| a - 1), chart_1 - 1))
}

#[pymethods]
impl PyField {
    #[staticmethod]
    fn diagonal(eigenvalues: Vec<PyRef<'_, PyFunc>>) -> PyResult<PyField> {
        Ok(PyField(core::VectorField::diagonal(&constants(&eigenvalues)?).py()?))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("VectorField({})", self.0)
    }

    fn components(&self) -> Vec<PyFunc> {
        self.0.components().iter().cloned().map(PyFunc).collect()
    }

    /// X(f).
    fn apply(&self, f: &PyFunc) -> PyResult<PyFunc> {
        Ok(PyFunc(core::directional_derivative(&self.0, &f.0).py()?))
    }

    /// Interior product i_X w.
    fn ip(&self, py: Python<'_>, w: &PyForm) -> PyResult<Py<PyAny>> {
        let r = core::interior_product(&self.0, &w.0).py()?;
        to_py(py, Value::from_form(r))
    }

    fn is_tangent(&self, w: &PyForm) -> PyResult<bool> {
        core::is_tangent(&self.0, &w.0).py()
    }

    fn is_first_integral(&self, f: &PyFunc) -> PyResult<bool> {
        Ok(core::is_first_integral(&self.0, &f.0).py()?.holds)
    }

    /// Eigenvalues of a diagonal linear part, or None.
    fn linear_part(&self) -> PyResult<Option<Vec<PyFunc>>> {
        let n = self.0.nvars();
        Ok(core::diagonal_linear_part(&self.0)
            .py()?
            .map(|v| v.into_iter().map(|c| PyFunc(RatFunc::constant(c, n))).collect()))
    }

    #[pyo3(signature = (chart, axis=None))]
    fn blowup(&self, chart: usize, axis: Option<usize>) -> PyResult<(PyField, i32, bool)> {
        let c = chart_from_user(chart, axis)?;
        let t = core::transform_vector_field(&self.0, &c).py()?;
        Ok((PyField(t.object), t.exceptional_multiplicity, t.dicritical))
    }

    /// Invariant surfaces f with X(f) = g f up to the degree cap: a list of
    /// (f, g) pairs and whether the search was complete.
    fn invariant_surfaces(&self, degree_cap: u32) -> PyResult<(Vec<(PyFunc, PyFunc)>, bool)> {
        let s = core::invariant_hypersurface_search(&self.0, degree_cap).py()?;
        let found = s
            .surfaces
            .into_iter()
            .map(|h| (PyFunc(RatFunc::from_poly(h.f)), PyFunc(RatFunc::from_poly(h.cofactor))))
            .collect();
        Ok((found, s.complete))
    }
}

#[pymethods]
impl PyPencil {
    #[new]
    fn new(w1: &PyForm, w2: &PyForm) -> PyResult<Self> {
        Ok(PyPencil(core::Pencil::new(w1.0.clone(), w2.0.clone()).py()?))
    }

    fn __repr__(&self) -> String {
        format!("Pencil({}, {})", self.0.gen1(), self.0.gen2())
    }

    #[getter]
    fn gen1(&self) -> PyForm {
        PyForm(self.0.gen1().clone())
    }

    #[getter]
    fn gen2(&self) -> PyForm {
        PyForm(self.0.gen2().clone())
    }

    /// The connection form theta with dw = theta ^ w on every member.
    #[getter]
    fn theta(&self) -> PyForm {
        PyForm(self.0.connection_form().clone())
    }

    #[getter]
    fn curvature(&self) -> PyForm {
        PyForm(self.0.curvature().clone())
    }

    /// a w1 + b w2 with its codimension-one part removed.
    fn member(&self, a: &PyFunc, b: &PyFunc) -> PyResult<PyForm> {
        let (Some(a), Some(b)) = (a.0.as_constant(), b.0.as_constant()) else {
            return Err(PyTypeError::new_err("member parameters must be constants"));
        };
        Ok(PyForm(self.0.member(&a, &b).py()?))
    }

    /// The classification name and its certificate data as strings.
    fn classify(&self) -> PyResult<(String, Vec<(String, String)>)> {
        use core::PencilClassification as C;
        let c = self.0.classify().py()?;
        let mut data: Vec<(String, String)> = vec![];
        let mut put = |k: &str, v: String| data.push((k.to_string(), v));
        match &c {
            C::FlatHolomorphicFirstIntegral { theta, potential } => {
                put("theta", theta.to_string());
                put("potential", potential.to_string());
            }
            C::FlatMeromorphic { theta, polar } => {
                put("theta", theta.to_string());
                put("polar", polar.to_string());
            }
            C::ConstantCurvatureFactor {
                alpha,
                mu1,
                mu2,
                axis_first_integral,
                closed_member,
            } => {
                put("alpha", alpha.to_string());
                put("mu1", mu1.to_string());
                put("mu2", mu2.to_string());
                if let Some(f) = axis_first_integral {
                    put("axis_first_integral", f.to_string());
                }
                if let Some(w) = closed_member {
                    put("closed_member", w.to_string());
                }
            }
            C::NonconstantCurvatureFactor {
                alpha,
                k1,
                k2,
                axis_first_integral,
            } => {
                put("alpha", alpha.to_string());
                put("k1", k1.to_string());
                put("k2", k2.to_string());
                put("axis_first_integral", axis_first_integral.to_string());
            }
        }
        Ok((c.name().to_string(), data))
    }
}

/// Integer relations sum m_i a_i = 0 with m in Z^n, as a lattice basis.
#[pyfunction]
fn strong_resonances(values: Vec<PyRef<'_, PyFunc>>) -> PyResult<Vec<Vec<String>>> {
    let basis = core::strong_resonances(&eigenvalues(&values)?).py()?;
    Ok(basis
        .relations
        .iter()
        .map(|r| r.iter().map(|m| m.to_string()).collect())
        .collect())
}

#[pyfunction]
fn is_strongly_diagonalizable(values: Vec<PyRef<'_, PyFunc>>) -> PyResult<bool> {
    Ok(core::is_strongly_diagonalizable(&eigenvalues(&values)?))
}

/// Eigenvalues after a blow-up chart; indices from 1.
#[pyfunction]
#[pyo3(signature = (values, chart, axis=None))]
fn blowup_eigenvalues(values: Vec<PyRef<'_, PyFunc>>, chart: usize, axis: Option<usize>) -> PyResult<Vec<PyFunc>> {
    let n = values.first().map_or(0, |f| f.0.nvars());
    let b = core::blowup_eigenvalue_law(&eigenvalues(&values)?, &chart_from_user(chart, axis)?).py()?;
    Ok(b.values().iter().map(|c| PyFunc(RatFunc::constant(c.clone(), n))).collect())
}

/// The logarithmic pencil tangent to the diagonal field with these
/// eigenvalues.
#[pyfunction]
fn tangent_log_pencil(values: Vec<PyRef<'_, PyFunc>>) -> PyResult<PyPencil> {
    Ok(PyPencil(core::tangent_log_pencil(&eigenvalues(&values)?).py()?.pencil))
}

/// Pencil through three forms tangent to a common 2-form eta.
#[pyfunction]
fn pencil_from_three(w1: &PyForm, w2: &PyForm, w3: &PyForm, eta: &PyForm) -> PyResult<PyPencil> {
    Ok(PyPencil(core::pencil_from_three(&w1.0, &w2.0, &w3.0, &eta.0).py()?))
}

#[pyfunction]
fn pencil_condition(w1: &PyForm, w2: &PyForm) -> PyResult<bool> {
    core::pencil_condition(&w1.0, &w2.0).py()
}

/// The Jouanolou field and form of degree m over Q in three variables.
#[pyfunction]
fn jouanolou(m: u32) -> PyResult<(PyField, PyForm)> {
    let (x, w) = core::jouanolou(m).py()?;
    Ok((PyField(x), PyForm(w)))
}

/// Normal form of a 1-form with a simple singularity: the name ("I", "II"
/// or None) and the residues.
#[pyfunction]
#[pyo3(signature = (w, values, order=8, bound=50))]
fn normal_form(
    w: &PyForm,
    values: Vec<PyRef<'_, PyFunc>>,
    order: u32,
    bound: u64,
) -> PyResult<(Option<String>, Vec<PyFunc>)> {
    let r = core::recognize_normal_form(&w.0, &eigenvalues(&values)?, order, bound).py()?;
    let n = w.0.nvars();
    Ok((
        r.normal_form.map(|f| f.name().to_string()),
        r.residues.into_iter().map(|c| PyFunc(RatFunc::constant(c, n))).collect(),
    ))
}

/// Runs a script; returns (exit code, report as text or JSON).
#[pyfunction]
#[pyo3(signature = (source, json=false, order=8, bound=50, samples=20, seed=0))]
fn run_script(
    source: &str,
    json: bool,
    order: u32,
    bound: u64,
    samples: usize,
    seed: u64,
) -> PyResult<(i32, String)> {
    let options = Options {
        order,
        bound,
        samples,
        seed,
    };
    let (report, _) = run_source("<python>", source, &options).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = if json { report.to_json() } else { report.to_text() };
    Ok((report.exit_code, out))
}

#[pymodule]
fn foliation_kit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("CertificateError", py.get_type::<CertificateError>())?;
    m.add_class::<PyContext>()?;
    m.add_class::<PyFunc>()?;
    m.add_class::<PyForm>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyPencil>()?;
    m.add_function(wrap_pyfunction!(strong_resonances, m)?)?;
    m.add_function(wrap_pyfunction!(is_strongly_diagonalizable, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(tangent_log_pencil, m)?)?;
    m.add_function(wrap_pyfunction!(pencil_from_three, m)?)?;
    m.add_function(wrap_pyfunction!(pencil_condition, m)?)?;
    m.add_function(wrap_pyfunction!(jouanolou, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(run_script, m)?)?;
    m.add("SCHEMA_VERSION", foliation_cli::report::SCHEMA_VERSION)?;
    Ok(())
}
