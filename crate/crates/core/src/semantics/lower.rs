use std::fmt;

use super::ir::{BoolExpr, Decl, QlExpr, QueryIR};
use super::logic::{apply_necessity, desugar_implication, expand_membership, simplify};
use super::SemanticError;
use crate::frontend::{Exp, Literal, QueryAst, Rhs, Statement};
use crate::patterns::{lower_invocation_as, lower_ordering, lower_signature};
use crate::registry::{AttributeRule, Registry, ResultKind};

/// A lowering failure and the 0-based sentence it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerError {
    pub sentence: usize,
    pub error: SemanticError,
}

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.error)
    }
}

impl std::error::Error for LowerError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub sentence: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lowering {
    pub ir: QueryIR,
    pub warnings: Vec<Warning>,
}

pub fn lower(ast: &QueryAst, reg: &Registry) -> Result<QueryIR, LowerError> {
    lower_with_warnings(ast, reg).map(|l| l.ir)
}

fn conjuncts(stmt: &Statement) -> Vec<&Statement> {
    match stmt {
        Statement::And(a, b) => {
            let mut out = conjuncts(a);
            out.extend(conjuncts(b));
            out
        }
        other => vec![other],
    }
}

struct Ctx<'r> {
    reg: &'r Registry,
    decls: Vec<Decl>,
    /// (method, class) of positive invocations that produced a declaration.
    invocations: Vec<(String, String)>,
    warnings: Vec<Warning>,
    sentence: usize,
}

pub fn lower_with_warnings(ast: &QueryAst, reg: &Registry) -> Result<Lowering, LowerError> {
    let mut ctx = Ctx {
        reg,
        decls: Vec::new(),
        invocations: Vec::new(),
        warnings: Vec::new(),
        sentence: 0,
    };
    let at = |sentence: usize| move |error: SemanticError| LowerError { sentence, error };

    // declarations first so that any sentence may refer to any declared name
    for (i, stmt) in ast.statements.iter().enumerate() {
        ctx.sentence = i;
        if matches!(stmt, Statement::Necessity(_)) {
            continue;
        }
        for c in conjuncts(stmt) {
            ctx.declare(c).map_err(at(i))?;
        }
    }

    let mut conds = Vec::new();
    let mut necessities = Vec::new();
    let mut emitted: Vec<String> = Vec::new();
    for (i, stmt) in ast.statements.iter().enumerate() {
        ctx.sentence = i;
        if let Statement::Necessity(inner) = stmt {
            necessities.push(ctx.condition(inner).map_err(at(i))?);
            continue;
        }
        for c in conjuncts(stmt) {
            match c {
                Statement::Invocation {
                    class_name,
                    method_name,
                    positive: true,
                } => {
                    if emitted.contains(method_name) {
                        continue;
                    }
                    emitted.push(method_name.clone());
                    let low = lower_invocation_as(
                        class_name,
                        method_name,
                        true,
                        reg.method_access_type(),
                    );
                    conds.push(low.cond);
                }
                Statement::Basic {
                    rhs: Rhs::TypeAssumption(_),
                    ..
                } => {}
                other => conds.push(ctx.condition(other).map_err(at(i))?),
            }
        }
    }
    if !necessities.is_empty() {
        conds.push(apply_necessity(necessities));
    }

    let condition = simplify(BoolExpr::And(conds));
    let selects = ctx.decls.iter().map(|d| d.var_name.clone()).collect();
    Ok(Lowering {
        ir: QueryIR {
            decls: ctx.decls,
            condition,
            selects,
        },
        warnings: ctx.warnings,
    })
}

impl Ctx<'_> {
    fn add_decl(&mut self, decl: Decl) -> Result<(), SemanticError> {
        if self.decls.iter().any(|d| d.var_name == decl.var_name) {
            return Err(SemanticError::DuplicateDeclaration(decl.var_name));
        }
        self.decls.push(decl);
        Ok(())
    }

    fn declare(&mut self, stmt: &Statement) -> Result<(), SemanticError> {
        match stmt {
            Statement::Invocation {
                class_name,
                method_name,
                positive: true,
            } => {
                if let Some((_, class)) = self.invocations.iter().find(|(m, _)| m == method_name) {
                    return if class == class_name {
                        Ok(())
                    } else {
                        Err(SemanticError::DuplicateDeclaration(method_name.clone()))
                    };
                }
                self.invocations
                    .push((method_name.clone(), class_name.clone()));
                let ty = self.reg.method_access_type().to_string();
                self.add_decl(Decl::new(method_name.clone(), ty))
            }
            Statement::Basic {
                lhs,
                rhs: Rhs::TypeAssumption(noun),
                ..
            } => {
                let Exp::Ident(name) = lhs else {
                    return Err(SemanticError::MisplacedAssumption(lhs.to_string()));
                };
                let ty = self
                    .reg
                    .ql_type(noun)
                    .ok_or_else(|| SemanticError::UnknownType(noun.clone()))?
                    .to_string();
                self.add_decl(Decl::new(name.clone(), ty))
            }
            _ => Ok(()),
        }
    }

    fn require_declared(&self, exp: &Exp) -> Result<(), SemanticError> {
        match exp.subject() {
            Some(name) if !self.decls.iter().any(|d| d.var_name == name) => {
                Err(SemanticError::UndeclaredSubject(name.to_string()))
            }
            _ => Ok(()),
        }
    }

    fn condition(&mut self, stmt: &Statement) -> Result<BoolExpr, SemanticError> {
        match stmt {
            Statement::Basic { lhs, negated, rhs } => {
                let cond = self.basic(lhs, rhs)?;
                Ok(if *negated { BoolExpr::not(cond) } else { cond })
            }
            Statement::And(a, b) => Ok(BoolExpr::all([self.condition(a)?, self.condition(b)?])),
            Statement::Or(a, b) => Ok(BoolExpr::any([self.condition(a)?, self.condition(b)?])),
            Statement::Not(inner) => Ok(BoolExpr::not(self.condition(inner)?)),
            Statement::If { cond, then } => {
                let p = self.condition(cond)?;
                let q = self.condition(then)?;
                Ok(desugar_implication(p, q))
            }
            Statement::Necessity(_) => Err(SemanticError::NestedNecessity),
            Statement::Invocation {
                class_name,
                method_name,
                positive,
            } => {
                // only reached below the top level; bind the call existentially
                let low = lower_invocation_as(
                    class_name,
                    method_name,
                    false,
                    self.reg.method_access_type(),
                );
                Ok(if *positive {
                    match low.cond {
                        BoolExpr::Not(inner) => *inner,
                        other => other,
                    }
                } else {
                    low.cond
                })
            }
            Statement::Ordering { before, after, .. } => lower_ordering(before, after, &self.decls),
            Statement::Signature {
                method_name,
                type_names,
                positive,
            } => lower_signature(method_name, type_names, *positive, &self.decls),
        }
    }

    fn basic(&mut self, lhs: &Exp, rhs: &Rhs) -> Result<BoolExpr, SemanticError> {
        self.require_declared(lhs)?;
        match rhs {
            Rhs::TypeAssumption(_) => Err(SemanticError::MisplacedAssumption(lhs.to_string())),
            Rhs::List(items) => {
                let string_cmp = items.iter().any(Literal::is_string);
                let left = resolve_exp(lhs, self.reg, string_cmp)?;
                let items: Vec<Literal> =
                    items.iter().map(|item| self.qualify(lhs, item)).collect();
                expand_membership(&left, &items)
            }
            Rhs::Exp(rhs) => {
                self.require_declared(rhs)?;
                let (left, right) = match (lhs, rhs) {
                    (_, Exp::Literal(lit)) => {
                        let left = resolve_exp(lhs, self.reg, lit.is_string())?;
                        (left, QlExpr::Lit(self.qualify(lhs, lit)))
                    }
                    (Exp::Literal(lit), _) => {
                        let right = resolve_exp(rhs, self.reg, lit.is_string())?;
                        (QlExpr::Lit(self.qualify(rhs, lit)), right)
                    }
                    _ => (
                        resolve_exp(lhs, self.reg, false)?,
                        resolve_exp(rhs, self.reg, false)?,
                    ),
                };
                Ok(BoolExpr::eq(left, right))
            }
        }
    }

    /// Maps a simple type name through the alias table when compared against
    /// an aliased attribute such as `type of`.
    fn qualify(&mut self, against: &Exp, lit: &Literal) -> Literal {
        let Literal::Str(name) = lit else {
            return lit.clone();
        };
        let aliased = outermost_rule(against, self.reg).is_some_and(|r| r.aliased);
        if !aliased {
            return lit.clone();
        }
        match self.reg.resolve_alias(name) {
            Some(q) => Literal::Str(q.to_string()),
            None => {
                if !name.contains('.') {
                    self.warnings.push(Warning {
                        sentence: self.sentence,
                        message: format!("no alias for type name `{name}`; compared as written"),
                    });
                }
                lit.clone()
            }
        }
    }
}

fn outermost_rule<'r>(e: &Exp, reg: &'r Registry) -> Option<&'r AttributeRule> {
    match e {
        Exp::Prefixed { attribute, .. } => reg.lookup(attribute).ok(),
        _ => None,
    }
}

/// Resolves an expression to a QL term. The innermost identifier becomes a
/// variable; each attribute layer appends its call chain, filling the ordinal
/// slot zero-based. When `comparison_is_string` holds and the outermost rule is
/// object-valued, `toString()` is appended.
pub fn resolve_exp(
    e: &Exp,
    reg: &Registry,
    comparison_is_string: bool,
) -> Result<QlExpr, SemanticError> {
    match e {
        Exp::Literal(lit) => Ok(QlExpr::Lit(lit.clone())),
        Exp::Ident(name) => Ok(QlExpr::var(name.clone())),
        Exp::Prefixed {
            attribute,
            ordinal,
            inner,
        } => {
            let base = resolve_exp(inner, reg, false)?;
            let rule = reg.lookup(attribute)?;
            let index = match (ordinal, rule.has_ordinal_slot()) {
                (Some(_), false) => {
                    return Err(SemanticError::OrdinalNotAllowed(attribute.clone()))
                }
                (None, true) => return Err(SemanticError::MissingOrdinal(attribute.clone())),
                (Some(n), true) => Some(*n as i64 - 1),
                (None, false) => None,
            };
            let chain = base.call(rule.instantiate(index));
            if comparison_is_string && rule.result == ResultKind::ObjectValued {
                Ok(chain.method("toString"))
            } else {
                Ok(chain)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_text;
    use crate::qlgen::render_condition;
    use crate::registry::builtin_crypto_profile;

    fn lowered(text: &str) -> Result<Lowering, SemanticError> {
        let ast = parse_text(text).unwrap();
        lower_with_warnings(&ast, &builtin_crypto_profile()).map_err(|e| e.error)
    }

    fn cond(text: &str) -> String {
        render_condition(&lowered(text).unwrap().ir.condition)
    }

    const INIT: &str = "An object of Cipher invokes init. ";

    #[test]
    fn invocation_example() {
        let ir = lowered("An object of Cipher invokes init.").unwrap().ir;
        assert_eq!(ir.decls, vec![Decl::new("init", "MethodAccess")]);
        assert_eq!(ir.selects, vec!["init".to_string()]);
        assert_eq!(
            render_condition(&ir.condition),
            r#"init.getMethod().getName() = "init" and init.getReceiverType().getName() = "Cipher""#
        );
    }

    #[test]
    fn resolution() {
        let reg = builtin_crypto_profile();
        let second = Exp::prefixed("argument", Some(2), Exp::ident("init"));
        assert_eq!(
            resolve_exp(&second, &reg, false).unwrap().to_string(),
            "init.getArgument(1)"
        );
        let ty = Exp::prefixed("type", None, second.clone());
        assert_eq!(
            resolve_exp(&ty, &reg, true).unwrap().to_string(),
            "init.getArgument(1).getType().toString()"
        );
        let name = Exp::prefixed("name", None, Exp::ident("method1"));
        assert_eq!(
            resolve_exp(&name, &reg, true).unwrap().to_string(),
            "method1.getName()"
        );
        let bad = Exp::prefixed("name", Some(1), Exp::ident("m"));
        assert_eq!(
            resolve_exp(&bad, &reg, false).unwrap_err(),
            SemanticError::OrdinalNotAllowed("name".into())
        );
    }

    #[test]
    fn merged_and_conflicting_invocations() {
        let ir = lowered("An object of Cipher invokes init. An object of Cipher invokes init.")
            .unwrap()
            .ir;
        assert_eq!(ir.decls.len(), 1);
        assert_eq!(
            lowered("An object of Cipher invokes init. An object of Mac invokes init.")
                .unwrap_err(),
            SemanticError::DuplicateDeclaration("init".into())
        );
    }

    #[test]
    fn undeclared_and_unknown() {
        assert_eq!(
            lowered(r#"the name of foo is "x"."#).unwrap_err(),
            SemanticError::UndeclaredSubject("foo".into())
        );
        assert!(matches!(
            lowered(&format!(r#"{INIT}the colour of init is "red"."#)).unwrap_err(),
            SemanticError::UnknownAttribute { word, known } if word == "colour" && known.contains(&"name".to_string())
        ));
        assert_eq!(
            lowered(&format!(r#"{INIT}the argument of init is "x"."#)).unwrap_err(),
            SemanticError::MissingOrdinal("argument".into())
        );
    }

    #[test]
    fn type_assumptions() {
        let ir = lowered(r#"var1 is a variable. If var1 is "RSA" then var1 is "AES"."#)
            .unwrap()
            .ir;
        assert_eq!(ir.decls, vec![Decl::new("var1", "Variable")]);
        assert_eq!(
            render_condition(&ir.condition),
            r#"not (var1 = "RSA") or var1 = "AES""#
        );
        assert_eq!(
            lowered("var1 is a gizmo.").unwrap_err(),
            SemanticError::UnknownType("gizmo".into())
        );
        assert_eq!(
            lowered("var1 is a variable. var1 is a class.").unwrap_err(),
            SemanticError::DuplicateDeclaration("var1".into())
        );
    }

    #[test]
    fn aliases_and_warnings() {
        let l = lowered(&format!(
            r#"{INIT}the type of the second argument of init is "PublicKey"."#
        ))
        .unwrap();
        assert!(render_condition(&l.ir.condition)
            .ends_with(r#".getType().toString() = "java.security.PublicKey""#));
        assert!(l.warnings.is_empty());
        let l = lowered(&format!(
            r#"{INIT}the type of the second argument of init is "Widget"."#
        ))
        .unwrap();
        assert_eq!(l.warnings.len(), 1);
        assert_eq!(l.warnings[0].sentence, 1);
        // only aliased attributes qualify names
        let plain = cond(&format!(r#"{INIT}init's first argument is "PublicKey"."#));
        assert!(plain.ends_with(r#"init.getArgument(0).toString() = "PublicKey""#));
    }

    #[test]
    fn negation_and_necessities() {
        let c = cond(&format!(r#"{INIT}init's first argument is not "x"."#));
        assert!(c.ends_with(r#"not (init.getArgument(0).toString() = "x")"#));
        let two = cond(&format!(
            r#"{INIT}It is necessary that init's first argument is "a". It is necessary that init's second argument is "b"."#
        ));
        assert!(two.ends_with(
            r#"(not (init.getArgument(0).toString() = "a") or not (init.getArgument(1).toString() = "b"))"#
        ));
    }

    #[test]
    fn nested_invocation_is_existential() {
        let c = cond(&format!(
            r#"{INIT}If an object of Cipher invokes doFinal then init's first argument is "x"."#
        ));
        assert!(c.contains("not (exists (MethodAccess doFinal | "), "{c}");
        let ir = lowered(&format!(
            r#"{INIT}If an object of Cipher invokes doFinal then init's first argument is "x"."#
        ))
        .unwrap()
        .ir;
        assert_eq!(ir.decls.len(), 1);
        assert!(ir.condition.free_vars().iter().all(|v| v == "init"));
    }

    #[test]
    fn deterministic() {
        let text = format!(r#"{INIT}It is necessary that init's first argument is in ["a", "b"]."#);
        assert_eq!(lowered(&text).unwrap(), lowered(&text).unwrap());
    }
}
