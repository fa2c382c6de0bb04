//! CodeQL text generation, a reader for the emitted subset, and the
//! normalizer used to compare generated queries with reference text.

mod lexer;
mod reader;
mod render;

use thiserror::Error;

use crate::semantics::{BoolExpr, QlExpr, QueryIR};

pub use lexer::{lex_ql, LexError, QlToken, QlTokenKind};
pub use render::{render, render_condition, RenderOptions, MIN_LINE_WIDTH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QlgenError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("expected {expected}, found {found}")]
    Read { expected: String, found: String },
    #[error("line width {0} is below the minimum of 40")]
    LineWidth(usize),
}

/// Parses QL text back into a query structure.
pub fn parse_ql(text: &str) -> Result<QueryIR, QlgenError> {
    reader::read_tokens(&lex_ql(text)?)
}

/// `WRAP MODE` inside a string becomes `WRAP_MODE`: a single space between
/// two upper-case letters is read as a lost underscore.
fn restore_underscores(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len());
    for (i, &c) in chars.iter().enumerate() {
        let between_caps = c == ' '
            && i > 0
            && chars[i - 1].is_ascii_uppercase()
            && chars.get(i + 1).is_some_and(char::is_ascii_uppercase);
        out.push(if between_caps { '_' } else { c });
    }
    out
}

fn canonical_strings(e: &mut BoolExpr) {
    fn in_expr(q: &mut QlExpr) {
        match q {
            QlExpr::Lit(crate::frontend::Literal::Str(s)) => *s = restore_underscores(s),
            QlExpr::Chain { base, steps } => {
                in_expr(base);
                for step in steps {
                    for arg in &mut step.args {
                        if let crate::frontend::Literal::Str(s) = arg {
                            *s = restore_underscores(s);
                        }
                    }
                }
            }
            QlExpr::Count(inner) => in_expr(inner),
            QlExpr::Var(_) | QlExpr::Lit(_) => {}
        }
    }
    match e {
        BoolExpr::Eq(l, r) | BoolExpr::Lt(l, r) => {
            in_expr(l);
            in_expr(r);
        }
        BoolExpr::And(items) | BoolExpr::Or(items) => items.iter_mut().for_each(canonical_strings),
        BoolExpr::Not(inner) => canonical_strings(inner),
        BoolExpr::Exists { body, .. } => canonical_strings(body),
        BoolExpr::True => {}
    }
}

/// Canonical text for comparing queries: layout and redundant parentheses
/// are dropped and nested `and`/`or` chains are flattened; the order of
/// declarations, conjuncts and selects is kept. Text outside the readable
/// subset falls back to its token stream joined by single spaces.
pub fn normalize_ql(text: &str) -> String {
    let tokens = match lex_ql(text) {
        Ok(tokens) => tokens,
        Err(_) => return text.split_whitespace().collect::<Vec<_>>().join(" "),
    };
    match reader::read_tokens(&tokens) {
        Ok(mut ir) => {
            canonical_strings(&mut ir.condition);
            let wide = RenderOptions {
                line_width: usize::MAX,
                indent: 0,
            };
            render(&ir, &wide)
        }
        Err(_) => {
            let words: Vec<String> = tokens
                .into_iter()
                .map(|mut t| {
                    if t.kind == QlTokenKind::Str {
                        t.text = restore_underscores(&t.text);
                    }
                    t.to_string()
                })
                .collect();
            words.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_parens_do_not_matter() {
        let a = "from MethodAccess m\nwhere (m.getName() = \"x\") and ((m.getName() = \"y\"))\nselect m";
        let b =
            "from MethodAccess m where m.getName() = \"x\"\n   and m.getName() = \"y\" select m";
        assert_eq!(normalize_ql(a), normalize_ql(b));
        assert_eq!(
            normalize_ql(a),
            "from MethodAccess m\nwhere m.getName() = \"x\" and m.getName() = \"y\"\nselect m\n"
        );
    }

    #[test]
    fn flattening_only() {
        let n = normalize_ql("where (a.f() = 1 or b.f() = 1) or not (c.f() = 1 and d.f() = 1)");
        assert_eq!(
            n,
            "where a.f() = 1 or b.f() = 1 or not (c.f() = 1 and d.f() = 1)\nselect 1\n"
        );
    }

    #[test]
    fn underscore_restoration() {
        let n = normalize_ql(r#"where x.toString() = "Cipher.WRAP MODE" select x"#);
        assert!(n.contains(r#""Cipher.WRAP_MODE""#));
        assert_eq!(restore_underscores("A B c D"), "A_B c D");
    }

    #[test]
    fn idempotent_including_fallback() {
        for text in [
            "from MethodAccess m where count (m.getAnArgument()) = 2 select m",
            "import java\nfrom X y where y.f() != 1 select y",
            "where \"open",
        ] {
            let once = normalize_ql(text);
            assert_eq!(normalize_ql(&once), once, "{text}");
        }
    }

    #[test]
    fn bare_from_reads_as_empty() {
        let ir =
            parse_ql("from\nwhere not (exists (MethodAccess init | init.getName() = \"init\"))")
                .unwrap();
        assert!(ir.decls.is_empty());
        assert!(ir.selects.is_empty());
    }
}
