use crate::semantics::{BoolExpr, QueryIR};

use super::QlgenError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    pub line_width: usize,
    /// Spaces before each continuation line of a wrapped where-clause.
    pub indent: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            line_width: 100,
            indent: 2,
        }
    }
}

pub const MIN_LINE_WIDTH: usize = 40;

impl RenderOptions {
    pub fn new(line_width: usize, indent: usize) -> Result<Self, QlgenError> {
        if line_width < MIN_LINE_WIDTH {
            return Err(QlgenError::LineWidth(line_width));
        }
        Ok(RenderOptions { line_width, indent })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Or,
    And,
    Atom,
}

fn prec(e: &BoolExpr) -> Prec {
    match e {
        BoolExpr::Or(items) if items.len() > 1 => Prec::Or,
        BoolExpr::And(items) if items.len() > 1 => Prec::And,
        _ => Prec::Atom,
    }
}

fn write_cond(out: &mut String, e: &BoolExpr, min: Prec) {
    let wrap = prec(e) < min;
    if wrap {
        out.push('(');
    }
    match e {
        BoolExpr::Eq(l, r) => out.push_str(&format!("{l} = {r}")),
        BoolExpr::Lt(l, r) => out.push_str(&format!("{l} < {r}")),
        BoolExpr::And(items) | BoolExpr::Or(items) if items.is_empty() => {
            out.push_str(if matches!(e, BoolExpr::And(_)) {
                "any()"
            } else {
                "none()"
            })
        }
        BoolExpr::And(items) => join(out, items, " and ", Prec::And),
        BoolExpr::Or(items) => join(out, items, " or ", Prec::Or),
        BoolExpr::Not(inner) if **inner == BoolExpr::True => out.push_str("none()"),
        BoolExpr::Not(inner) => {
            out.push_str("not (");
            write_cond(out, inner, Prec::Or);
            out.push(')');
        }
        BoolExpr::Exists { decl, body } => {
            out.push_str(&format!("exists ({decl} | "));
            write_cond(out, body, Prec::Or);
            out.push(')');
        }
        BoolExpr::True => out.push_str("any()"),
    }
    if wrap {
        out.push(')');
    }
}

fn join(out: &mut String, items: &[BoolExpr], sep: &str, child_min: Prec) {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        write_cond(out, item, child_min);
    }
}

/// A condition on one line with minimal parentheses.
pub fn render_condition(e: &BoolExpr) -> String {
    let mut out = String::new();
    write_cond(&mut out, e, Prec::Or);
    out
}

fn render_at(e: &BoolExpr, min: Prec) -> String {
    let mut out = String::new();
    write_cond(&mut out, e, min);
    out
}

fn where_clause(cond: &BoolExpr, opts: &RenderOptions) -> String {
    let line = format!("where {}", render_condition(cond));
    if line.chars().count() <= opts.line_width {
        return line;
    }
    let (items, sep, min) = match cond {
        BoolExpr::And(items) if items.len() > 1 => (items, "and", Prec::And),
        BoolExpr::Or(items) if items.len() > 1 => (items, "or", Prec::Or),
        _ => return line,
    };
    let pad = " ".repeat(opts.indent);
    let mut out = format!("where {}", render_at(&items[0], min));
    for item in &items[1..] {
        out.push_str(&format!("\n{pad}{sep} {}", render_at(item, min)));
    }
    out
}

/// CodeQL text for `ir`. The from-clause is omitted without declarations and
/// `select 1` stands in for an empty select list.
pub fn render(ir: &QueryIR, opts: &RenderOptions) -> String {
    let mut lines = Vec::new();
    if !ir.decls.is_empty() {
        let decls: Vec<String> = ir.decls.iter().map(ToString::to_string).collect();
        lines.push(format!("from {}", decls.join(", ")));
    }
    if ir.condition != BoolExpr::True {
        lines.push(where_clause(&ir.condition, opts));
    }
    if ir.selects.is_empty() {
        lines.push("select 1".to_string());
    } else {
        lines.push(format!("select {}", ir.selects.join(", ")));
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{Decl, QlExpr};

    fn atom(name: &str) -> BoolExpr {
        BoolExpr::eq(QlExpr::var(name), QlExpr::int(1))
    }

    #[test]
    fn minimal_parentheses() {
        let e = BoolExpr::And(vec![
            atom("a"),
            BoolExpr::Or(vec![atom("b"), BoolExpr::And(vec![atom("c"), atom("d")])]),
            BoolExpr::not(atom("e")),
        ]);
        assert_eq!(
            render_condition(&e),
            "a = 1 and (b = 1 or c = 1 and d = 1) and not (e = 1)"
        );
    }

    #[test]
    fn exists_body_is_parenthesized() {
        let e = BoolExpr::not(BoolExpr::exists(Decl::new("m", "MethodAccess"), atom("m")));
        assert_eq!(
            render_condition(&e),
            "not (exists (MethodAccess m | m = 1))"
        );
    }

    #[test]
    fn empty_decls_and_selects() {
        let ir = QueryIR {
            decls: vec![],
            condition: atom("x"),
            selects: vec![],
        };
        assert_eq!(
            render(&ir, &RenderOptions::default()),
            "where x = 1\nselect 1\n"
        );
    }

    #[test]
    fn wraps_long_conjunctions() {
        let ir = QueryIR {
            decls: vec![Decl::new("a", "Variable")],
            condition: BoolExpr::And((0..12).map(|i| atom(&format!("v{i}"))).collect()),
            selects: vec!["a".into()],
        };
        let opts = RenderOptions::new(40, 4).unwrap();
        let text = render(&ir, &opts);
        assert!(text.lines().all(|l| l.len() <= 40), "{text}");
        assert!(text.contains("\n    and v1 = 1"));
        assert!(RenderOptions::new(39, 2).is_err());
    }
}
