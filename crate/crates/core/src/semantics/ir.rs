#![allow(clippy::should_implement_trait)]
use std::fmt::{self, Write};

use serde::Serialize;

use crate::frontend::Literal;

/// One method call in a chain, e.g. `splitAt("/", 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Call {
    pub method: String,
    pub args: Vec<Literal>,
}

impl Call {
    pub fn new(method: impl Into<String>, args: Vec<Literal>) -> Self {
        Call {
            method: method.into(),
            args,
        }
    }

    pub fn nullary(method: impl Into<String>) -> Self {
        Call::new(method, Vec::new())
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub(crate) fn ql_literal(lit: &Literal) -> String {
    match lit {
        Literal::Str(s) => quote(s),
        Literal::Int(i) => i.to_string(),
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(ql_literal).collect();
        write!(f, "{}({})", self.method, args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum QlExpr {
    Var(String),
    Lit(Literal),
    Chain { base: Box<QlExpr>, steps: Vec<Call> },
    Count(Box<QlExpr>),
}

impl QlExpr {
    pub fn var(name: impl Into<String>) -> Self {
        QlExpr::Var(name.into())
    }

    pub fn string(s: impl Into<String>) -> Self {
        QlExpr::Lit(Literal::Str(s.into()))
    }

    pub fn int(i: i64) -> Self {
        QlExpr::Lit(Literal::Int(i))
    }

    /// Appends calls, extending an existing chain rather than nesting one.
    pub fn call(self, steps: impl IntoIterator<Item = Call>) -> Self {
        let steps: Vec<Call> = steps.into_iter().collect();
        if steps.is_empty() {
            return self;
        }
        match self {
            QlExpr::Chain {
                base,
                steps: mut existing,
            } => {
                existing.extend(steps);
                QlExpr::Chain {
                    base,
                    steps: existing,
                }
            }
            other => QlExpr::Chain {
                base: Box::new(other),
                steps,
            },
        }
    }

    pub fn method(self, name: &str) -> Self {
        self.call([Call::nullary(name)])
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            QlExpr::Var(v) => out.push(v),
            QlExpr::Lit(_) => {}
            QlExpr::Chain { base, .. } => base.collect_vars(out),
            QlExpr::Count(inner) => inner.collect_vars(out),
        }
    }
}

impl fmt::Display for QlExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QlExpr::Var(v) => f.write_str(v),
            QlExpr::Lit(lit) => f.write_str(&ql_literal(lit)),
            QlExpr::Chain { base, steps } => {
                write!(f, "{base}")?;
                for step in steps {
                    write!(f, ".{step}")?;
                }
                Ok(())
            }
            QlExpr::Count(inner) => write!(f, "count({inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Decl {
    pub var_name: String,
    pub ql_type: String,
}

impl Decl {
    pub fn new(var_name: impl Into<String>, ql_type: impl Into<String>) -> Self {
        Decl {
            var_name: var_name.into(),
            ql_type: ql_type.into(),
        }
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.ql_type, self.var_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum BoolExpr {
    Eq(QlExpr, QlExpr),
    Lt(QlExpr, QlExpr),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Not(Box<BoolExpr>),
    Exists { decl: Decl, body: Box<BoolExpr> },
    True,
}

impl BoolExpr {
    pub fn eq(l: QlExpr, r: QlExpr) -> Self {
        BoolExpr::Eq(l, r)
    }

    pub fn not(inner: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(inner))
    }

    pub fn exists(decl: Decl, body: BoolExpr) -> Self {
        BoolExpr::Exists {
            decl,
            body: Box::new(body),
        }
    }

    /// Conjunction that flattens nested `And`s and unwraps singletons.
    pub fn all(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        let mut flat = Vec::new();
        for item in items {
            match item {
                BoolExpr::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => BoolExpr::True,
            1 => flat.pop().unwrap(),
            _ => BoolExpr::And(flat),
        }
    }

    /// Disjunction that flattens nested `Or`s and unwraps singletons.
    pub fn any(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        let mut flat = Vec::new();
        for item in items {
            match item {
                BoolExpr::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => BoolExpr::not(BoolExpr::True),
            1 => flat.pop().unwrap(),
            _ => BoolExpr::Or(flat),
        }
    }

    /// Variables occurring free, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.walk_free(&mut Vec::new(), &mut out);
        out
    }

    fn walk_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let note = |e: &QlExpr, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut vars = Vec::new();
            e.collect_vars(&mut vars);
            for v in vars {
                if !bound.iter().any(|b| b == v) && !out.iter().any(|o| o == v) {
                    out.push(v.to_string());
                }
            }
        };
        match self {
            BoolExpr::Eq(l, r) | BoolExpr::Lt(l, r) => {
                note(l, bound, out);
                note(r, bound, out);
            }
            BoolExpr::And(items) | BoolExpr::Or(items) => {
                for item in items {
                    item.walk_free(bound, out);
                }
            }
            BoolExpr::Not(inner) => inner.walk_free(bound, out),
            BoolExpr::Exists { decl, body } => {
                bound.push(decl.var_name.clone());
                body.walk_free(bound, out);
                bound.pop();
            }
            BoolExpr::True => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QueryIR {
    pub decls: Vec<Decl>,
    pub condition: BoolExpr,
    pub selects: Vec<String>,
}

impl QueryIR {
    /// Indented tree dump used by `--emit ir`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("decls:\n");
        for d in &self.decls {
            let _ = writeln!(out, "  {d}");
        }
        out.push_str("condition:\n");
        dump_bool(&mut out, &self.condition, 1);
        let _ = writeln!(out, "selects: {}", self.selects.join(", "));
        out
    }
}

fn dump_bool(out: &mut String, expr: &BoolExpr, depth: usize) {
    let pad = "  ".repeat(depth);
    match expr {
        BoolExpr::Eq(l, r) => {
            let _ = writeln!(out, "{pad}eq {l} {r}");
        }
        BoolExpr::Lt(l, r) => {
            let _ = writeln!(out, "{pad}lt {l} {r}");
        }
        BoolExpr::And(items) | BoolExpr::Or(items) => {
            let op = if matches!(expr, BoolExpr::And(_)) {
                "and"
            } else {
                "or"
            };
            let _ = writeln!(out, "{pad}{op}");
            for item in items {
                dump_bool(out, item, depth + 1);
            }
        }
        BoolExpr::Not(inner) => {
            let _ = writeln!(out, "{pad}not");
            dump_bool(out, inner, depth + 1);
        }
        BoolExpr::Exists { decl, body } => {
            let _ = writeln!(out, "{pad}exists {decl}");
            dump_bool(out, body, depth + 1);
        }
        BoolExpr::True => {
            let _ = writeln!(out, "{pad}true");
        }
    }
}
