//! Lowering of the invocation, ordering and signature patterns.

use crate::frontend::Literal;
use crate::semantics::{BoolExpr, Call, Decl, QlExpr, SemanticError};

pub const METHOD_ACCESS: &str = "MethodAccess";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternLowering {
    pub new_decls: Vec<Decl>,
    pub cond: BoolExpr,
    /// The declaration lives inside an `exists` in `cond` instead of `new_decls`.
    pub exists_bound: bool,
}

fn invocation_conjunction(class_name: &str, method_name: &str) -> BoolExpr {
    let m = QlExpr::var(method_name);
    BoolExpr::And(vec![
        BoolExpr::eq(
            m.clone().method("getMethod").method("getName"),
            QlExpr::string(method_name),
        ),
        BoolExpr::eq(
            m.method("getReceiverType").method("getName"),
            QlExpr::string(class_name),
        ),
    ])
}

/// `An object of C invokes m` / `... does not invoke m`.
pub fn lower_invocation(class_name: &str, method_name: &str, positive: bool) -> PatternLowering {
    lower_invocation_as(class_name, method_name, positive, METHOD_ACCESS)
}

/// [`lower_invocation`] with the declaration type taken from a registry.
pub fn lower_invocation_as(
    class_name: &str,
    method_name: &str,
    positive: bool,
    ql_type: &str,
) -> PatternLowering {
    let decl = Decl::new(method_name, ql_type);
    let cond = invocation_conjunction(class_name, method_name);
    if positive {
        PatternLowering {
            new_decls: vec![decl],
            cond,
            exists_bound: false,
        }
    } else {
        PatternLowering {
            new_decls: Vec::new(),
            cond: BoolExpr::not(BoolExpr::exists(decl, cond)),
            exists_bound: true,
        }
    }
}

fn require_declared(name: &str, decls: &[Decl]) -> Result<(), SemanticError> {
    if decls.iter().any(|d| d.var_name == name) {
        Ok(())
    } else {
        Err(SemanticError::UndeclaredSubject(name.to_string()))
    }
}

/// `before precedes after`: same enclosing callable, strictly earlier end line.
pub fn lower_ordering(
    before: &str,
    after: &str,
    decls: &[Decl],
) -> Result<BoolExpr, SemanticError> {
    require_declared(before, decls)?;
    require_declared(after, decls)?;
    let b = QlExpr::var(before);
    let a = QlExpr::var(after);
    let end_line = |e: QlExpr| e.method("getLocation").method("getEndLine");
    Ok(BoolExpr::And(vec![
        BoolExpr::eq(
            b.clone().method("getEnclosingCallable"),
            a.clone().method("getEnclosingCallable"),
        ),
        BoolExpr::Lt(end_line(b), end_line(a)),
    ]))
}

/// `m's signature is [t0, t1, ...]`: argument count plus one type check per position.
pub fn lower_signature(
    method_name: &str,
    type_names: &[String],
    positive: bool,
    decls: &[Decl],
) -> Result<BoolExpr, SemanticError> {
    require_declared(method_name, decls)?;
    if type_names.is_empty() {
        return Err(SemanticError::EmptyList);
    }
    let m = QlExpr::var(method_name);
    let mut conjuncts = Vec::with_capacity(type_names.len() + 1);
    conjuncts.push(BoolExpr::eq(
        QlExpr::Count(Box::new(m.clone().method("getAnArgument"))),
        QlExpr::int(type_names.len() as i64),
    ));
    for (i, ty) in type_names.iter().enumerate() {
        let arg_type = m
            .clone()
            .call([Call::new("getArgument", vec![Literal::Int(i as i64)])])
            .method("getType")
            .method("toString");
        conjuncts.push(BoolExpr::eq(arg_type, QlExpr::string(ty.clone())));
    }
    let cond = BoolExpr::And(conjuncts);
    Ok(if positive { cond } else { BoolExpr::not(cond) })
}
