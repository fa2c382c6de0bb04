use std::fmt;

use thiserror::Error;

use crate::frontend::Span;
use crate::semantics::quote;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QlTokenKind {
    Ident,
    Int,
    /// Decoded contents; escapes already resolved.
    Str,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QlToken {
    pub kind: QlTokenKind,
    pub text: String,
    pub span: Span,
}

impl QlToken {
    pub fn is(&self, text: &str) -> bool {
        self.kind != QlTokenKind::Str && self.text == text
    }
}

impl fmt::Display for QlToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            QlTokenKind::Str => f.write_str(&quote(&self.text)),
            _ => f.write_str(&self.text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at {span}")]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

const TWO_CHAR: &[&str] = &["!=", "<=", ">=", "::"];
const ONE_CHAR: &str = "()[]{},.=<>|!+-*/%;:@";

/// Splits QL text into tokens, skipping whitespace and `//` / `/* */` comments.
pub fn lex_ql(text: &str) -> Result<Vec<QlToken>, LexError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let rest = &text[i..];
        if rest.starts_with("//") {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        if let Some(body) = rest.strip_prefix("/*") {
            let Some(end) = body.find("*/") else {
                return Err(LexError {
                    span: Span::new(i, text.len()),
                    message: "unterminated comment".into(),
                });
            };
            i += end + 4;
            continue;
        }
        let start = i;
        if c == '"' {
            let mut value = String::new();
            let mut j = i + 1;
            loop {
                let Some(ch) = text[j..].chars().next() else {
                    return Err(LexError {
                        span: Span::new(start, text.len()),
                        message: "unterminated string".into(),
                    });
                };
                j += ch.len_utf8();
                match ch {
                    '"' => break,
                    '\\' => {
                        let Some(esc) = text[j..].chars().next() else {
                            continue;
                        };
                        j += esc.len_utf8();
                        value.push(match esc {
                            'n' => '\n',
                            't' => '\t',
                            'r' => '\r',
                            other => other,
                        });
                    }
                    '\n' => {
                        return Err(LexError {
                            span: Span::new(start, j - 1),
                            message: "unterminated string".into(),
                        })
                    }
                    other => value.push(other),
                }
            }
            out.push(QlToken {
                kind: QlTokenKind::Str,
                text: value,
                span: Span::new(start, j),
            });
            i = j;
        } else if c.is_ascii_digit() {
            let len = rest
                .find(|ch: char| !ch.is_ascii_digit())
                .unwrap_or(rest.len());
            out.push(tok(QlTokenKind::Int, rest, start, len));
            i += len;
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            let len = rest
                .find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == '$'))
                .unwrap_or(rest.len());
            out.push(tok(QlTokenKind::Ident, rest, start, len));
            i += len;
        } else if rest.get(..2).is_some_and(|two| TWO_CHAR.contains(&two)) {
            out.push(tok(QlTokenKind::Punct, rest, start, 2));
            i += 2;
        } else if ONE_CHAR.contains(c) {
            out.push(tok(QlTokenKind::Punct, rest, start, 1));
            i += 1;
        } else {
            return Err(LexError {
                span: Span::new(start, start + c.len_utf8()),
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

fn tok(kind: QlTokenKind, rest: &str, start: usize, len: usize) -> QlToken {
    QlToken {
        kind,
        text: rest[..len].to_string(),
        span: Span::new(start, start + len),
    }
}
