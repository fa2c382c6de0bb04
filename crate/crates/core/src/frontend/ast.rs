#![allow(clippy::should_implement_trait)]
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Literal {
    Str(String),
    Int(i64),
}

impl Literal {
    pub fn is_string(&self) -> bool {
        matches!(self, Literal::Str(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Exp {
    Literal(Literal),
    Ident(String),
    /// `[ordinal] attribute of inner`; `ordinal` is 1-based.
    Prefixed {
        attribute: String,
        ordinal: Option<u32>,
        inner: Box<Exp>,
    },
}

impl Exp {
    pub fn ident(name: impl Into<String>) -> Exp {
        Exp::Ident(name.into())
    }

    pub fn string(s: impl Into<String>) -> Exp {
        Exp::Literal(Literal::Str(s.into()))
    }

    pub fn prefixed(attribute: impl Into<String>, ordinal: Option<u32>, inner: Exp) -> Exp {
        Exp::Prefixed {
            attribute: attribute.into(),
            ordinal,
            inner: Box::new(inner),
        }
    }

    /// Identifier at the bottom of a prefix chain, if any.
    pub fn subject(&self) -> Option<&str> {
        match self {
            Exp::Ident(name) => Some(name),
            Exp::Literal(_) => None,
            Exp::Prefixed { inner, .. } => inner.subject(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Rhs {
    Exp(Exp),
    List(Vec<Literal>),
    /// English type noun from `X is a <noun>`, e.g. `variable` or `method access`.
    TypeAssumption(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Precedes,
    Follows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Statement {
    Basic {
        lhs: Exp,
        negated: bool,
        rhs: Rhs,
    },
    And(Box<Statement>, Box<Statement>),
    Or(Box<Statement>, Box<Statement>),
    Not(Box<Statement>),
    If {
        cond: Box<Statement>,
        then: Box<Statement>,
    },
    Necessity(Box<Statement>),
    Invocation {
        class_name: String,
        method_name: String,
        positive: bool,
    },
    Ordering {
        before: String,
        after: String,
        direction: Direction,
    },
    Signature {
        method_name: String,
        type_names: Vec<String>,
        positive: bool,
    },
}

impl Statement {
    pub fn and(a: Statement, b: Statement) -> Statement {
        Statement::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Statement, b: Statement) -> Statement {
        Statement::Or(Box::new(a), Box::new(b))
    }

    pub fn not(s: Statement) -> Statement {
        Statement::Not(Box::new(s))
    }

    pub fn implies(cond: Statement, then: Statement) -> Statement {
        Statement::If {
            cond: Box::new(cond),
            then: Box::new(then),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryAst {
    pub statements: Vec<Statement>,
}
