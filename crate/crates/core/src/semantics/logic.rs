use super::ir::{BoolExpr, QlExpr};
use super::SemanticError;
use crate::frontend::Literal;

/// `p => q` as `not p or q`.
pub fn desugar_implication(p: BoolExpr, q: BoolExpr) -> BoolExpr {
    BoolExpr::Or(vec![BoolExpr::not(p), q])
}

/// Condition that holds when at least one constraint is violated:
/// `not T1` for one constraint, `not T1 or ... or not Tn` otherwise.
pub fn apply_necessity(constraints: Vec<BoolExpr>) -> BoolExpr {
    let mut negated: Vec<BoolExpr> = constraints.into_iter().map(BoolExpr::not).collect();
    match negated.len() {
        // nothing to violate
        0 => BoolExpr::not(BoolExpr::True),
        1 => negated.pop().unwrap(),
        _ => BoolExpr::Or(negated),
    }
}

/// `lhs in [a, b, ...]` as `lhs = a or lhs = b or ...`, in list order.
pub fn expand_membership(lhs: &QlExpr, items: &[Literal]) -> Result<BoolExpr, SemanticError> {
    let mut eqs: Vec<BoolExpr> = items
        .iter()
        .map(|item| BoolExpr::eq(lhs.clone(), QlExpr::Lit(item.clone())))
        .collect();
    match eqs.len() {
        0 => Err(SemanticError::EmptyList),
        1 => Ok(eqs.pop().unwrap()),
        _ => Ok(BoolExpr::Or(eqs)),
    }
}

/// Truth-preserving cleanup applied once after lowering.
///
/// Flattens nested `and`/`or`, removes double negation, folds the constants
/// `true` / `not true`, and pushes a negation through `and`/`or` when that
/// strictly reduces the number of negations at that node. The push decision
/// looks at the operand as written, before its children are simplified, so
/// `not (not p or q)` becomes `p and not q` even when `p` is itself compound.
pub fn simplify(expr: BoolExpr) -> BoolExpr {
    match expr {
        BoolExpr::Not(inner) => negate(*inner),
        BoolExpr::And(items) => fold_and(items.into_iter().map(simplify).collect()),
        BoolExpr::Or(items) => fold_or(items.into_iter().map(simplify).collect()),
        BoolExpr::Exists { decl, body } => BoolExpr::exists(decl, simplify(*body)),
        leaf => leaf,
    }
}

fn is_negative(expr: &BoolExpr) -> bool {
    let mut depth = 0;
    let mut cur = expr;
    while let BoolExpr::Not(inner) = cur {
        depth += 1;
        cur = inner;
    }
    depth % 2 == 1
}

/// Simplified form of `not expr`.
fn negate(expr: BoolExpr) -> BoolExpr {
    match expr {
        BoolExpr::Not(inner) => simplify(*inner),
        BoolExpr::And(items) if pushes_negation(&items) => {
            fold_or(items.into_iter().map(negate).collect())
        }
        BoolExpr::Or(items) if pushes_negation(&items) => {
            fold_and(items.into_iter().map(negate).collect())
        }
        other => match simplify(other) {
            BoolExpr::Not(inner) => *inner,
            simplified => BoolExpr::not(simplified),
        },
    }
}

/// De Morgan leaves `n - k` negations in place of `1 + k`.
fn pushes_negation(items: &[BoolExpr]) -> bool {
    let negative = items.iter().filter(|i| is_negative(i)).count();
    negative > 0 && 2 * negative >= items.len()
}

fn fold_and(items: Vec<BoolExpr>) -> BoolExpr {
    let is_false = |e: &BoolExpr| matches!(e, BoolExpr::Not(inner) if **inner == BoolExpr::True);
    if items.iter().any(is_false) {
        return BoolExpr::not(BoolExpr::True);
    }
    BoolExpr::all(items.into_iter().filter(|e| *e != BoolExpr::True))
}

fn fold_or(items: Vec<BoolExpr>) -> BoolExpr {
    let is_false = |e: &BoolExpr| matches!(e, BoolExpr::Not(inner) if **inner == BoolExpr::True);
    if items.contains(&BoolExpr::True) {
        return BoolExpr::True;
    }
    BoolExpr::any(items.into_iter().filter(|e| !is_false(e)))
}
