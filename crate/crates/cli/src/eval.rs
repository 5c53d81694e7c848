//! Evaluation of script expressions to exact algebraic values.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use foliation_core::{
    ext_derivative, interior_product, jouanolou, wedge, Error as CoreError, FieldElement, MeroForm, NumberField, Poly,
    RatFunc, Rational, VectorField,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::script::{BinOp, Expr, FieldDecl, Script};

/// Failure while evaluating an expression or running a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// Ill-typed operands or bad literal arguments (exit class 1).
    Type(String),
    /// An error reported by the algebra kernel.
    Core(CoreError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Type(m) => write!(f, "type error: {m}"),
            EvalError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<CoreError> for EvalError {
    fn from(e: CoreError) -> Self {
        EvalError::Core(e)
    }
}

pub type EResult<T> = Result<T, EvalError>;

pub fn type_error<T>(msg: impl Into<String>) -> EResult<T> {
    Err(EvalError::Type(msg.into()))
}

#[derive(Clone, Debug)]
pub enum Value {
    Func(RatFunc),
    /// Degree at least 1.
    Form(MeroForm),
    Field(VectorField),
    List(Vec<Value>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Func(_) => "function",
            Value::Form(_) => "form",
            Value::Field(_) => "vector field",
            Value::List(_) => "list",
        }
    }

    pub fn as_func(&self) -> EResult<&RatFunc> {
        match self {
            Value::Func(f) => Ok(f),
            v => type_error(format!("expected a function, found a {}", v.kind())),
        }
    }

    pub fn as_poly(&self) -> EResult<Poly> {
        match self.as_func()?.as_poly() {
            Some(p) => Ok(p.clone()),
            None => type_error("expected a polynomial, found a proper fraction"),
        }
    }

    pub fn as_constant(&self) -> EResult<FieldElement> {
        match self.as_func()?.as_constant() {
            Some(c) => Ok(c),
            None => type_error("expected a constant"),
        }
    }

    /// Forms of any degree; functions count as 0-forms.
    pub fn as_form(&self) -> EResult<MeroForm> {
        match self {
            Value::Func(f) => Ok(MeroForm::function(f.clone())),
            Value::Form(w) => Ok(w.clone()),
            v => type_error(format!("expected a form, found a {}", v.kind())),
        }
    }

    pub fn as_one_form(&self) -> EResult<MeroForm> {
        let w = self.as_form()?;
        if w.degree() != 1 {
            return Err(CoreError::WrongDegree {
                expected: 1,
                found: w.degree(),
            }
            .into());
        }
        Ok(w)
    }

    pub fn as_field(&self) -> EResult<&VectorField> {
        match self {
            Value::Field(x) => Ok(x),
            v => type_error(format!("expected a vector field, found a {}", v.kind())),
        }
    }

    pub fn as_list(&self) -> EResult<&[Value]> {
        match self {
            Value::List(v) => Ok(v),
            v => type_error(format!("expected a list, found a {}", v.kind())),
        }
    }

    pub fn as_constants(&self) -> EResult<Vec<FieldElement>> {
        self.as_list()?.iter().map(Value::as_constant).collect()
    }

    pub fn as_polys(&self) -> EResult<Vec<Poly>> {
        self.as_list()?.iter().map(Value::as_poly).collect()
    }

    pub fn as_u32(&self) -> EResult<u32> {
        let c = self.as_constant()?;
        c.as_rational()
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_u32())
            .map_or_else(|| type_error("expected a nonnegative integer"), Ok)
    }

    pub fn from_form(w: MeroForm) -> Value {
        match w.as_function() {
            Some(f) if w.degree() == 0 => Value::Func(f),
            _ => Value::Form(w),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Func(x) => write!(f, "{x}"),
            Value::Form(x) => write!(f, "{x}"),
            Value::Field(x) => write!(f, "{x}"),
            Value::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

/// Evaluation context: the number field, the ambient dimension and the
/// bindings made so far.
pub struct Env {
    pub field: Arc<NumberField>,
    pub nvars: usize,
    pub bindings: BTreeMap<String, Value>,
}

fn literal(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Builds K from the declaration: the minimal polynomial is evaluated as a
/// univariate rational polynomial in the generator.
pub fn build_field(decl: &Option<FieldDecl>) -> EResult<Arc<NumberField>> {
    let Some(FieldDecl::Extension { generator, minpoly }) = decl else {
        return Ok(NumberField::rationals());
    };
    let q = NumberField::rationals();
    let mut env = Env {
        field: q.clone(),
        nvars: 1,
        bindings: BTreeMap::new(),
    };
    env.bindings.insert(generator.clone(), Value::Func(RatFunc::var(&q, 1, 0)));
    let p = env.eval(minpoly)?.as_poly()?;
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[0] as usize] = c.as_rational().cloned().expect("rational coefficient");
    }
    Ok(NumberField::new(generator, coeffs)?)
}

impl Env {
    pub fn new(script: &Script) -> EResult<Env> {
        let field = build_field(&script.field)?;
        let mut bindings = BTreeMap::new();
        if let Some(FieldDecl::Extension { generator, .. }) = &script.field {
            bindings.insert(
                generator.clone(),
                Value::Func(RatFunc::constant(FieldElement::generator(&field), script.nvars)),
            );
        }
        Ok(Env {
            field,
            nvars: script.nvars,
            bindings,
        })
    }

    fn constant(&self, c: FieldElement) -> Value {
        Value::Func(RatFunc::constant(c, self.nvars))
    }

    pub fn eval(&self, e: &Expr) -> EResult<Value> {
        match e {
            Expr::Num(n) => Ok(self.constant(FieldElement::from_rational(&self.field, literal(n)))),
            Expr::Name(name) => {
                if let Some(v) = self.bindings.get(name) {
                    return Ok(v.clone());
                }
                match crate::script::variable_index(name) {
                    Some(i) if i < self.nvars => Ok(Value::Func(RatFunc::var(&self.field, self.nvars, i))),
                    _ => type_error(format!("unbound name `{name}`")),
                }
            }
            Expr::Neg(inner) => negate(self.eval(inner)?),
            Expr::Bin(op, a, b) => self.binary(*op, self.eval(a)?, self.eval(b)?),
            Expr::Pow(base, k) => {
                let f = self.eval(base)?;
                let e = i32::try_from(*k).map_err(|_| EvalError::Type("exponent too large".into()))?;
                Ok(Value::Func(f.as_func()?.pow(e)?))
            }
            Expr::List(items) => Ok(Value::List(items.iter().map(|x| self.eval(x)).collect::<EResult<_>>()?)),
            Expr::Call(name, args) => {
                let vals: Vec<Value> = args.iter().map(|x| self.eval(x)).collect::<EResult<_>>()?;
                self.call(name, vals)
            }
        }
    }

    fn call(&self, name: &str, args: Vec<Value>) -> EResult<Value> {
        match name {
            "d" => Ok(Value::from_form(ext_derivative(&args[0].as_form()?))),
            "ip" => Ok(Value::from_form(interior_product(args[0].as_field()?, &args[1].as_form()?)?)),
            "vf" => {
                let comps = args.iter().map(|v| v.as_func().cloned()).collect::<EResult<_>>()?;
                Ok(Value::Field(VectorField::new(comps)?))
            }
            "diag" => {
                let a: Vec<FieldElement> = args.iter().map(Value::as_constant).collect::<EResult<_>>()?;
                Ok(Value::Field(VectorField::diagonal(&a)?))
            }
            "jouanolou_x" | "jouanolou_w" => {
                if self.nvars != 3 || !self.field.is_rationals() {
                    return type_error(format!("{name} lives over Q in three variables"));
                }
                let (x, w) = jouanolou(args[0].as_u32()?)?;
                Ok(if name == "jouanolou_x" { Value::Field(x) } else { Value::Form(w) })
            }
            _ => type_error(format!("unknown function `{name}`")),
        }
    }

    fn binary(&self, op: BinOp, a: Value, b: Value) -> EResult<Value> {
        use Value::*;
        let mismatch = |a: &Value, b: &Value| type_error(format!("cannot combine a {} with a {}", a.kind(), b.kind()));
        match op {
            BinOp::Add | BinOp::Sub => {
                let b = if op == BinOp::Sub { negate(b)? } else { b };
                match (&a, &b) {
                    (Func(x), Func(y)) => Ok(Func(x.add(y))),
                    (Form(x), Form(y)) if x.degree() == y.degree() => Ok(Value::from_form(x.checked_add(y)?)),
                    (Field(x), Field(y)) => Ok(Field(VectorField::new(
                        x.components().iter().zip(y.components()).map(|(p, q)| p.add(q)).collect(),
                    )?)),
                    _ => mismatch(&a, &b),
                }
            }
            BinOp::Mul => match (&a, &b) {
                (Func(x), Func(y)) => Ok(Func(x.mul(y))),
                (Func(f), Form(w)) | (Form(w), Func(f)) => Ok(Value::from_form(w.scale(f))),
                (Func(f), Field(x)) | (Field(x), Func(f)) => Ok(Field(x.scale(f))),
                _ => mismatch(&a, &b),
            },
            BinOp::Div => {
                let inv = b.as_func()?.inverse()?;
                self.binary(BinOp::Mul, a, Func(inv))
            }
            BinOp::Wedge => Ok(Value::from_form(wedge(&a.as_form()?, &b.as_form()?)?)),
        }
    }
}

fn negate(v: Value) -> EResult<Value> {
    Ok(match v {
        Value::Func(f) => Value::Func(f.neg()),
        Value::Form(w) => Value::Form(w.neg()),
        Value::Field(x) => Value::Field(VectorField::new(x.components().iter().map(|c| c.neg()).collect())?),
        Value::List(_) => return type_error("cannot negate a list"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::{parse, Stmt};

    fn run(src: &str) -> Env {
        let s = parse(src).unwrap();
        let mut env = Env::new(&s).unwrap();
        for st in &s.statements {
            if let Stmt::Let { name, expr } = st {
                let v = env.eval(expr).unwrap();
                env.bindings.insert(name.clone(), v);
            }
        }
        env
    }

    #[test]
    fn field_generator_is_a_scalar() {
        let env = run("field t: t^2 - 2; let w = x2*d(x1) - t*x1*d(x2); let s = t*t;");
        assert_eq!(env.field.degree(), 2);
        assert_eq!(env.bindings["s"].as_constant().unwrap(), FieldElement::from_int(&env.field, 2));
        // printed values read back as the same value
        let printed = env.bindings["w"].to_string();
        let again = run(&format!("field t: t^2 - 2; let v = {printed};"));
        assert_eq!(again.bindings["v"].as_form().unwrap(), env.bindings["w"].as_form().unwrap());
    }

    #[test]
    fn jouanolou_builtins_agree() {
        let env = run("let X = vf(x3^2, x1^2, x2^2); let w = ip(vf(x1, x2, x3), ip(X, d(x1)^^d(x2)^^d(x3)));");
        let (x, w) = jouanolou(2).unwrap();
        assert_eq!(env.bindings["X"].as_field().unwrap(), &x);
        assert_eq!(env.bindings["w"].as_form().unwrap(), w);
    }

    #[test]
    fn type_errors() {
        let s = parse("let a = d(x1) + x1;").unwrap();
        let env = Env::new(&s).unwrap();
        let Stmt::Let { expr, .. } = &s.statements[0] else { panic!() };
        assert!(matches!(env.eval(expr), Err(EvalError::Type(_))));
        let s = parse("let a = 1/(x1 - x1);").unwrap();
        let Stmt::Let { expr, .. } = &s.statements[0] else { panic!() };
        assert!(matches!(env.eval(expr), Err(EvalError::Core(CoreError::DivisionByZero))));
    }
}
