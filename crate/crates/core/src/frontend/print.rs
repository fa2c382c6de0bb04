use std::fmt::{self, Write};

use super::ast::{Direction, Exp, Literal, QueryAst, Rhs, Statement};
use super::token::ORDINALS;

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Str(s) => write!(f, "\"{s}\""),
            Literal::Int(i) => write!(f, "{i}"),
        }
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exp::Literal(lit) => write!(f, "{lit}"),
            Exp::Ident(name) => f.write_str(name),
            Exp::Prefixed {
                attribute,
                ordinal,
                inner,
            } => {
                f.write_str("the ")?;
                if let Some(n) = ordinal {
                    match ORDINALS.get(*n as usize - 1) {
                        Some(word) => write!(f, "{word} ")?,
                        None => write!(f, "{n}th ")?,
                    }
                }
                write!(f, "{attribute} of {inner}")
            }
        }
    }
}

fn list(items: &[Literal]) -> String {
    let inner: Vec<String> = items.iter().map(|l| l.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

fn article(noun: &str) -> &'static str {
    match noun.chars().next() {
        Some(c) if "aeiouAEIOU".contains(c) => "an",
        _ => "a",
    }
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Disjunction,
    Conjunction,
    Unary,
}

fn write_statement(out: &mut String, stmt: &Statement, level: Level) {
    match stmt {
        Statement::Or(a, b) if level <= Level::Disjunction => {
            write_statement(out, a, Level::Disjunction);
            out.push_str(" or ");
            write_statement(out, b, Level::Conjunction);
        }
        Statement::And(a, b) if level <= Level::Conjunction => {
            write_statement(out, a, Level::Conjunction);
            out.push_str(" and ");
            write_statement(out, b, Level::Unary);
        }
        // no surface syntax for grouping; emit the loosest form and let the
        // reader's precedence decide
        Statement::Or(a, b) => {
            write_statement(out, a, Level::Disjunction);
            out.push_str(" or ");
            write_statement(out, b, Level::Conjunction);
        }
        Statement::And(a, b) => {
            write_statement(out, a, Level::Conjunction);
            out.push_str(" and ");
            write_statement(out, b, Level::Unary);
        }
        Statement::Not(inner) => {
            out.push_str("it is false that ");
            write_statement(out, inner, Level::Unary);
        }
        Statement::If { cond, then } => {
            out.push_str("if ");
            write_statement(out, cond, Level::Disjunction);
            out.push_str(" then ");
            write_statement(out, then, Level::Conjunction);
        }
        Statement::Necessity(inner) => {
            out.push_str("it is necessary that ");
            write_statement(out, inner, Level::Disjunction);
        }
        Statement::Basic { lhs, negated, rhs } => {
            let _ = write!(out, "{lhs} is ");
            if *negated {
                out.push_str("not ");
            }
            let _ = match rhs {
                Rhs::Exp(e) => write!(out, "{e}"),
                Rhs::List(items) => write!(out, "in {}", list(items)),
                Rhs::TypeAssumption(noun) => write!(out, "{} {noun}", article(noun)),
            };
        }
        Statement::Invocation {
            class_name,
            method_name,
            positive,
        } => {
            let verb = if *positive {
                "invokes"
            } else {
                "does not invoke"
            };
            let _ = write!(out, "an object of {class_name} {verb} {method_name}");
        }
        Statement::Ordering {
            before,
            after,
            direction,
        } => {
            let _ = match direction {
                Direction::Precedes => write!(out, "{before} precedes {after}"),
                Direction::Follows => write!(out, "{after} follows {before}"),
            };
        }
        Statement::Signature {
            method_name,
            type_names,
            positive,
        } => {
            let items: Vec<Literal> = type_names.iter().cloned().map(Literal::Str).collect();
            let _ = write!(
                out,
                "the signature of {method_name} is {}{}",
                if *positive { "" } else { "not " },
                list(&items)
            );
        }
    }
}

/// Canonical controlled-English rendering of one statement, without the period.
pub fn statement_to_string(stmt: &Statement) -> String {
    let mut out = String::new();
    write_statement(&mut out, stmt, Level::Disjunction);
    out
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&statement_to_string(self))
    }
}

impl fmt::Display for QueryAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, stmt) in self.statements.iter().enumerate() {
            if i > 0 {
                f.write_char('\n')?;
            }
            let text = statement_to_string(stmt);
            // only keyword-led sentences are capitalized; identifiers are case-sensitive
            let keyword_led = ["it ", "an ", "if ", "the "]
                .iter()
                .any(|k| text.starts_with(k));
            if keyword_led {
                let mut chars = text.chars();
                if let Some(c) = chars.next() {
                    f.write_char(c.to_ascii_uppercase())?;
                    f.write_str(chars.as_str())?;
                }
            } else {
                f.write_str(&text)?;
            }
            f.write_char('.')?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::frontend::parse_text;

    #[test]
    fn prints_canonical_english() {
        let ast = parse_text(
            r#"An object of Cipher invokes getInstance. It is necessary that if the algorithm of getInstance's first argument is "RSA" then the mode of getInstance's first argument is in ["", "ECB"]."#,
        )
        .unwrap();
        assert_eq!(
            ast.to_string(),
            "An object of Cipher invokes getInstance.\nIt is necessary that if the algorithm of the first argument of getInstance is \"RSA\" then the mode of the first argument of getInstance is in [\"\", \"ECB\"]."
        );
    }

    #[test]
    fn identifiers_keep_case() {
        let ast = parse_text("getInstance precedes init.").unwrap();
        assert_eq!(ast.to_string(), "getInstance precedes init.");
    }
}
