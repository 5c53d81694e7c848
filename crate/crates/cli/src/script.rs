//! The `.fol` script language: lexer, parser and pretty-printer.
//!
//! ```text
//! script  := [field] stmt*
//! field   := "field" IDENT ":" expr ";" | "field" "Q" ";"
//! stmt    := "let" IDENT "=" expr ";" | COMMAND arg* ";"
//! arg     := atom | "--" IDENT [atom | STRING]
//! expr    := wedge (("+" | "-") wedge)*
//! wedge   := prod (("^^" | "∧") prod)*
//! prod    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ["^" INT | "^" "(" "-" INT ")"]
//! atom    := INT | IDENT | IDENT "(" expr,* ")" | "[" expr,* "]" | "(" expr ")"
//! ```

use num_bigint::BigInt;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptError {
    Syntax { line: usize, col: usize, msg: String },
    UnboundName { line: usize, col: usize, name: String },
    ArityMismatch { line: usize, name: String, expected: String, found: usize },
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptError::Syntax { line, col, msg } => write!(f, "syntax error at {line}:{col}: {msg}"),
            ScriptError::UnboundName { line, col, name } => write!(f, "unbound name `{name}` at {line}:{col}"),
            ScriptError::ArityMismatch {
                line,
                name,
                expected,
                found,
            } => write!(f, "arity mismatch at line {line}: `{name}` expects {expected}, found {found}"),
        }
    }
}

impl std::error::Error for ScriptError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    /// Byte offsets, used to glue hyphenated command names.
    start: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ScriptError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = vec![];
    let (mut line, mut line_start) = (1usize, 0usize);
    let mut i = 0;
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let offset = |i: usize| chars.get(i).map(|&(o, _)| o).unwrap_or(src.len());
    while i < chars.len() {
        let (off, c) = chars[i];
        let col = src[line_start..off].chars().count() + 1;
        if c == '\n' {
            line += 1;
            line_start = off + 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            Tok::Int(src[off..offset(i)].parse().unwrap())
        } else if c.is_alphabetic() || c == '_' {
            while at(i).is_some_and(|c| c.is_alphanumeric() || c == '_') {
                i += 1;
            }
            Tok::Ident(src[off..offset(i)].to_string())
        } else if c == '"' {
            i += 1;
            let s = i;
            while at(i).is_some_and(|c| c != '"' && c != '\n') {
                i += 1;
            }
            if at(i) != Some('"') {
                return Err(ScriptError::Syntax {
                    line,
                    col,
                    msg: "unterminated string".into(),
                });
            }
            let text = src[offset(s)..offset(i)].to_string();
            i += 1;
            Tok::Str(text)
        } else {
            let two: String = chars[i..].iter().take(2).map(|&(_, c)| c).collect();
            let sym: &'static str = match (two.as_str(), c) {
                ("^^", _) => "^^",
                ("--", _) if at(i + 2).is_some_and(|c| c.is_alphabetic()) => "--",
                (_, '∧') => "^^",
                (_, '+') => "+",
                (_, '-') => "-",
                (_, '*') => "*",
                (_, '/') => "/",
                (_, '^') => "^",
                (_, '(') => "(",
                (_, ')') => ")",
                (_, '[') => "[",
                (_, ']') => "]",
                (_, ',') => ",",
                (_, ';') => ";",
                (_, ':') => ":",
                (_, '=') => "=",
                _ => {
                    return Err(ScriptError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            };
            i += if c != '∧' && sym.len() == 2 { 2 } else { 1 };
            Tok::Sym(sym)
        };
        out.push(Token {
            tok,
            line,
            col,
            start: offset(start),
            end: offset(i),
        });
    }
    let col = src[line_start..].chars().count() + 1;
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

impl BinOp {
    fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Wedge => " ^^ ",
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Wedge => 2,
            BinOp::Mul | BinOp::Div => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(String, Vec<Expr>),
    List(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlagValue {
    Int(BigInt),
    Str(String),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Expr(Expr),
    Flag(String, Option<FlagValue>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Let { name: String, expr: Expr },
    Command { name: String, args: Vec<Arg> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldDecl {
    Rationals,
    Extension { generator: String, minpoly: Expr },
}

#[derive(Clone, Debug)]
pub struct Script {
    pub field: Option<FieldDecl>,
    pub statements: Vec<Stmt>,
    /// Source line of each statement.
    pub lines: Vec<usize>,
    /// Ambient dimension: the largest variable index used, at least 3.
    pub nvars: usize,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.statements == other.statements
    }
}

/// Positional arity and accepted flags of every command.
pub struct CommandSpec {
    pub name: &'static str,
    pub arity: &'static [usize],
    pub flags: &'static [&'static str],
    /// Flags that take a value.
    pub valued: &'static [&'static str],
}

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec { name: "check-tangent", arity: &[2], flags: &[], valued: &[] },
    CommandSpec { name: "check-integrable", arity: &[1], flags: &[], valued: &[] },
    CommandSpec { name: "remove-codim1", arity: &[1], flags: &[], valued: &[] },
    CommandSpec { name: "resonance", arity: &[1], flags: &["strong", "nonneg", "bound"], valued: &["bound"] },
    CommandSpec {
        name: "blowup",
        arity: &[1],
        flags: &["punctual", "monoidal", "axis", "chart"],
        valued: &["axis", "chart"],
    },
    CommandSpec { name: "pencil-check", arity: &[2], flags: &["samples"], valued: &["samples"] },
    CommandSpec { name: "pencil-from-three", arity: &[4], flags: &[], valued: &[] },
    CommandSpec { name: "pencil-theta", arity: &[2], flags: &["samples"], valued: &["samples"] },
    CommandSpec { name: "pencil-curvature", arity: &[2], flags: &[], valued: &[] },
    CommandSpec { name: "pencil-classify", arity: &[2], flags: &[], valued: &[] },
    CommandSpec { name: "pencil-sample", arity: &[2], flags: &["samples"], valued: &["samples"] },
    CommandSpec { name: "log-pencil", arity: &[1, 3], flags: &[], valued: &[] },
    CommandSpec { name: "normal-form", arity: &[2], flags: &["order", "bound"], valued: &["order", "bound"] },
    CommandSpec { name: "ch-check", arity: &[1], flags: &["bound"], valued: &["bound"] },
    CommandSpec { name: "jouanolou", arity: &[1], flags: &[], valued: &[] },
    CommandSpec { name: "first-integral", arity: &[2], flags: &[], valued: &[] },
    CommandSpec { name: "surface-check", arity: &[2], flags: &[], valued: &[] },
    CommandSpec { name: "surface-search", arity: &[1], flags: &["cap"], valued: &["cap"] },
];

pub fn command_spec(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// Built-in functions and their arities (`None`: one per variable).
pub const FUNCTIONS: &[(&str, Option<usize>)] = &[
    ("d", Some(1)),
    ("ip", Some(2)),
    ("vf", None),
    ("diag", None),
    ("jouanolou_x", Some(1)),
    ("jouanolou_w", Some(1)),
];

fn function_arity(name: &str) -> Option<Option<usize>> {
    FUNCTIONS.iter().find(|(n, _)| *n == name).map(|(_, a)| *a)
}

/// Index (0-based) of a coordinate name `x1`, `x2`, ...
pub fn variable_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    if rest.is_empty() || rest.starts_with('0') || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: BTreeSet<String>,
    generator: Option<String>,
    max_var: usize,
    /// Calls whose arity depends on the dimension: (line, name, count).
    deferred: Vec<(usize, String, usize)>,
    /// Set while reading the head of a command argument, where `f (x)` is
    /// two arguments and only `f(x)` is a call.
    arg_head: bool,
}

type PResult<T> = Result<T, ScriptError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, msg: impl Into<String>) -> ScriptError {
        ScriptError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<Token> {
        if self.is_sym(s) {
            Ok(self.next())
        } else {
            let t = self.peek().clone();
            Err(self.error_at(&t, format!("expected `{s}`, found {}", describe(&t.tok))))
        }
    }

    fn ident(&mut self) -> PResult<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            other => Err(self.error_at(&t, format!("expected a name, found {}", describe(other)))),
        }
    }

    fn script(&mut self) -> PResult<Script> {
        let mut field = None;
        let mut statements = vec![];
        let mut lines = vec![];
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => break,
                Tok::Ident(k) if k == "field" => {
                    if field.is_some() || !statements.is_empty() {
                        return Err(self.error_at(&t, "the field declaration must come first and only once"));
                    }
                    self.next();
                    field = Some(self.field_decl()?);
                }
                Tok::Ident(k) if k == "let" => {
                    self.next();
                    let (name, nt) = self.ident()?;
                    if variable_index(&name).is_some()
                        || Some(&name) == self.generator.as_ref()
                        || function_arity(&name).is_some()
                        || name == "let"
                        || name == "field"
                    {
                        return Err(self.error_at(&nt, format!("`{name}` is reserved")));
                    }
                    self.expect_sym("=")?;
                    let expr = self.expr()?;
                    self.expect_sym(";")?;
                    self.scope.insert(name.clone());
                    statements.push(Stmt::Let { name, expr });
                    lines.push(t.line);
                }
                Tok::Ident(_) => {
                    let stmt = self.command()?;
                    statements.push(stmt);
                    lines.push(t.line);
                }
                other => return Err(self.error_at(&t, format!("expected a statement, found {}", describe(other)))),
            }
        }
        Ok(Script {
            field,
            statements,
            lines,
            nvars: self.max_var.max(3),
        })
    }

    fn field_decl(&mut self) -> PResult<FieldDecl> {
        let (name, t) = self.ident()?;
        if name == "Q" && self.is_sym(";") {
            self.next();
            return Ok(FieldDecl::Rationals);
        }
        if variable_index(&name).is_some() || function_arity(&name).is_some() {
            return Err(self.error_at(&t, format!("`{name}` cannot name a field generator")));
        }
        self.expect_sym(":")?;
        self.generator = Some(name.clone());
        let minpoly = self.expr()?;
        self.expect_sym(";")?;
        Ok(FieldDecl::Extension { generator: name, minpoly })
    }

    fn command(&mut self) -> PResult<Stmt> {
        let (mut name, first) = self.ident()?;
        let mut end = first.end;
        // glue `pencil-check` style names written without spaces
        loop {
            let (a, b) = (&self.toks[self.pos], self.toks.get(self.pos + 1));
            match (a, b) {
                (Token { tok: Tok::Sym("-"), start, .. }, Some(Token { tok: Tok::Ident(s), start: s2, end: e2, .. }))
                    if *start == end && *s2 == start + 1 =>
                {
                    name = format!("{name}-{s}");
                    end = *e2;
                    self.pos += 2;
                }
                _ => break,
            }
        }
        let Some(spec) = command_spec(&name) else {
            return Err(self.error_at(&first, format!("unknown command `{name}`")));
        };
        let mut args = vec![];
        let mut positional = 0;
        while !self.is_sym(";") {
            if self.is_sym("--") {
                self.next();
                let (flag, ft) = self.ident()?;
                if flag != "expect" && !spec.flags.contains(&flag.as_str()) {
                    return Err(self.error_at(&ft, format!("`{name}` does not take --{flag}")));
                }
                let value = if flag == "expect" || spec.valued.contains(&flag.as_str()) {
                    let vt = self.next();
                    Some(match &vt.tok {
                        Tok::Int(n) => FlagValue::Int(n.clone()),
                        Tok::Str(s) => FlagValue::Str(s.clone()),
                        Tok::Ident(s) => FlagValue::Name(s.clone()),
                        other => return Err(self.error_at(&vt, format!("--{flag} needs a value, found {}", describe(other)))),
                    })
                } else {
                    None
                };
                args.push(Arg::Flag(flag, value));
            } else if matches!(self.peek().tok, Tok::Eof) {
                let t = self.peek().clone();
                return Err(self.error_at(&t, "expected `;` to end the command"));
            } else {
                self.arg_head = true;
                args.push(Arg::Expr(self.unary()?));
                positional += 1;
            }
        }
        self.expect_sym(";")?;
        if !spec.arity.contains(&positional) {
            let expected = spec.arity.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" or ");
            return Err(ScriptError::ArityMismatch {
                line: first.line,
                name,
                expected: format!("{expected} argument(s)"),
                found: positional,
            });
        }
        Ok(Stmt::Command { name, args })
    }

    fn binary_rhs(&mut self, op_tok: &Token, f: fn(&mut Self) -> PResult<Expr>) -> PResult<Expr> {
        if matches!(self.peek().tok, Tok::Eof | Tok::Sym(";") | Tok::Sym(")") | Tok::Sym(",") | Tok::Sym("]")) {
            let what = match &op_tok.tok {
                Tok::Sym(s) => s.to_string(),
                _ => "operator".into(),
            };
            return Err(self.error_at(op_tok, format!("dangling `{what}`: missing right operand")));
        }
        f(self)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.wedge()?;
        loop {
            let op = if self.is_sym("+") {
                BinOp::Add
            } else if self.is_sym("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let t = self.next();
            let rhs = self.binary_rhs(&t, Self::wedge)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn wedge(&mut self) -> PResult<Expr> {
        let mut lhs = self.product()?;
        while self.is_sym("^^") {
            let t = self.next();
            let rhs = self.binary_rhs(&t, Self::product)?;
            lhs = Expr::Bin(BinOp::Wedge, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.is_sym("*") {
                BinOp::Mul
            } else if self.is_sym("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let t = self.next();
            let rhs = self.binary_rhs(&t, Self::unary)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.is_sym("-") {
            let t = self.next();
            let inner = self.binary_rhs(&t, Self::unary)?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if !self.is_sym("^") {
            return Ok(base);
        }
        let caret = self.next();
        let (neg, t) = if self.is_sym("(") {
            self.next();
            self.expect_sym("-")?;
            let t = self.next();
            self.expect_sym(")")?;
            (true, t)
        } else {
            (false, self.next())
        };
        let Tok::Int(n) = &t.tok else {
            return Err(self.error_at(&caret, "exponent must be an integer literal"));
        };
        let e: i64 = n.try_into().map_err(|_| self.error_at(&t, "exponent too large"))?;
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn list(&mut self, close: &str) -> PResult<Vec<Expr>> {
        let mut items = vec![];
        if self.is_sym(close) {
            self.next();
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.is_sym(",") {
                self.next();
                continue;
            }
            self.expect_sym(close)?;
            return Ok(items);
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let head = std::mem::take(&mut self.arg_head);
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(Expr::Num(n.clone())),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("[") => Ok(Expr::List(self.list("]")?)),
            Tok::Ident(name) => {
                if self.is_sym("(") && (!head || self.peek().start == t.end) {
                    let Some(arity) = function_arity(name) else {
                        return Err(ScriptError::UnboundName {
                            line: t.line,
                            col: t.col,
                            name: name.clone(),
                        });
                    };
                    self.next();
                    let args = self.list(")")?;
                    match arity {
                        Some(a) if a != args.len() => {
                            return Err(ScriptError::ArityMismatch {
                                line: t.line,
                                name: name.clone(),
                                expected: format!("{a} argument(s)"),
                                found: args.len(),
                            })
                        }
                        None => self.deferred.push((t.line, name.clone(), args.len())),
                        _ => {}
                    }
                    return Ok(Expr::Call(name.clone(), args));
                }
                if let Some(i) = variable_index(name) {
                    self.max_var = self.max_var.max(i + 1);
                } else if Some(name) != self.generator.as_ref() && !self.scope.contains(name) {
                    return Err(ScriptError::UnboundName {
                        line: t.line,
                        col: t.col,
                        name: name.clone(),
                    });
                }
                Ok(Expr::Name(name.clone()))
            }
            other => Err(self.error_at(&t, format!("expected an expression, found {}", describe(other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("`{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

pub fn parse(src: &str) -> Result<Script, ScriptError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        scope: BTreeSet::new(),
        generator: None,
        max_var: 0,
        deferred: vec![],
        arg_head: false,
    };
    let script = p.script()?;
    for (line, name, found) in p.deferred {
        if found != script.nvars {
            return Err(ScriptError::ArityMismatch {
                line,
                name,
                expected: format!("{} argument(s), one per variable", script.nvars),
                found,
            });
        }
    }
    Ok(script)
}

// ---------------------------------------------------------------- printing

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(op, ..) => op.precedence(),
        Expr::Neg(_) => 4,
        Expr::Pow(..) => 5,
        _ => 6,
    }
}

fn write_child(out: &mut String, e: &Expr, min: u8) {
    if expr_prec(e) < min {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_list(out: &mut String, items: &[Expr]) {
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Num(n) => out.push_str(&n.to_string()),
        Expr::Name(s) => out.push_str(s),
        Expr::Neg(inner) => {
            out.push('-');
            write_child(out, inner, 5);
        }
        Expr::Bin(op, a, b) => {
            let p = op.precedence();
            write_child(out, a, p);
            out.push_str(op.symbol());
            // operators are left associative
            write_child(out, b, p + 1);
        }
        Expr::Pow(base, k) => {
            write_child(out, base, 6);
            if *k < 0 {
                out.push_str(&format!("^(-{})", -k));
            } else {
                out.push_str(&format!("^{k}"));
            }
        }
        Expr::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            write_list(out, args);
            out.push(')');
        }
        Expr::List(items) => {
            out.push('[');
            write_list(out, items);
            out.push(']');
        }
    }
}

pub fn format_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

/// Commands take atoms; anything looser is parenthesised.
pub fn format_arg(a: &Arg) -> String {
    match a {
        Arg::Expr(e) => {
            let mut s = String::new();
            write_child(&mut s, e, 4);
            s
        }
        Arg::Flag(name, None) => format!("--{name}"),
        Arg::Flag(name, Some(FlagValue::Int(n))) => format!("--{name} {n}"),
        Arg::Flag(name, Some(FlagValue::Name(v))) => format!("--{name} {v}"),
        Arg::Flag(name, Some(FlagValue::Str(v))) => format!("--{name} \"{v}\""),
    }
}

pub fn format_stmt(s: &Stmt) -> String {
    match s {
        Stmt::Let { name, expr } => format!("let {name} = {};", format_expr(expr)),
        Stmt::Command { name, args } => {
            let mut out = name.clone();
            for a in args {
                out.push(' ');
                out.push_str(&format_arg(a));
            }
            out.push(';');
            out
        }
    }
}

/// Normalised source: one statement per line, comments dropped.
pub fn pretty(script: &Script) -> String {
    let mut out = String::new();
    match &script.field {
        Some(FieldDecl::Rationals) => out.push_str("field Q;\n"),
        Some(FieldDecl::Extension { generator, minpoly }) => {
            out.push_str(&format!("field {generator}: {};\n", format_expr(minpoly)));
        }
        None => {}
    }
    for s in &script.statements {
        out.push_str(&format_stmt(s));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_examples() {
        let s = parse("field t: t^2 - 2; let w = x2*d(x1) - t*x1*d(x2);").unwrap();
        assert_eq!(s.statements.len(), 1);
        assert!(matches!(&s.field, Some(FieldDecl::Extension { generator, .. }) if generator == "t"));
        let s = parse("let X = vf(x3^2, x1^2, x2^2);").unwrap();
        assert!(matches!(&s.statements[0], Stmt::Let { expr: Expr::Call(f, a), .. } if f == "vf" && a.len() == 3));
    }

    #[test]
    fn dangling_wedge() {
        let err = parse("let w = d(x1 ∧").unwrap_err();
        assert_eq!(
            err,
            ScriptError::Syntax {
                line: 1,
                col: 14,
                msg: "dangling `^^`: missing right operand".into()
            }
        );
    }

    #[test]
    fn scope_and_arity() {
        assert!(matches!(parse("let w = y*d(x1);"), Err(ScriptError::UnboundName { name, .. }) if name == "y"));
        assert!(matches!(parse("let X = vf(x1, x2);"), Err(ScriptError::ArityMismatch { .. })));
        assert!(matches!(parse("check-tangent x1;"), Err(ScriptError::ArityMismatch { .. })));
        assert!(matches!(parse("let a = 1; field t: t^2 - 2;"), Err(ScriptError::Syntax { .. })));
        assert!(matches!(parse("frobnicate x1;"), Err(ScriptError::Syntax { .. })));
    }

    #[test]
    fn command_names_and_flags() {
        let s = parse("resonance [1, 2, 3] --nonneg --bound 10 --expect \"no resonance up to bound 10\";").unwrap();
        let Stmt::Command { name, args } = &s.statements[0] else { panic!() };
        assert_eq!(name, "resonance");
        assert_eq!(args.len(), 4);
        // a spaced minus is not part of a command name
        assert!(parse("pencil - check x1 x2;").is_err());
        // a spaced parenthesis starts a new argument
        let s = parse("let c = d(x1); pencil-check c (d(x2));").unwrap();
        let Stmt::Command { args, .. } = &s.statements[1] else { panic!() };
        assert_eq!(args.len(), 2);
    }

    #[test]
    fn round_trip() {
        let src = "field t: t^2 - 2;\n\
                   # comment\n\
                   let a = -x1^2 + (x2 - x3)*t/3;\n\
                   let w = a*d(x1) ^^ d(x2) - (x1 - (x2 - x3))*d(x3);\n\
                   let b = x1^(-2)*-x2 - -x3;\n\
                   check-integrable (x2*d(x1) - x1*d(x2)) --expect true;\n\
                   blowup diag(1, 2, 3) --punctual --chart 1;\n";
        let s = parse(src).unwrap();
        let p = pretty(&s);
        let s2 = parse(&p).unwrap();
        assert_eq!(s, s2);
        assert_eq!(pretty(&s2), p);
    }
}
