//! Controlled-English front end: tokenizer, paraphrase normalizer and parser.

mod ast;
mod normalize;
mod parser;
mod print;
mod token;

use thiserror::Error;

pub use ast::{Direction, Exp, Literal, QueryAst, Rhs, Statement};
pub(crate) use normalize::article_is_name;
pub use normalize::normalize;
pub use parser::{parse_query, parse_query_with_spans};
pub use print::statement_to_string;
pub use token::{ordinal_value, tokenize, Span, Token, TokenKind, KEYWORDS, ORDINALS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("unterminated string literal")]
    UnterminatedString { span: Span },
    #[error("illegal character `{ch}`")]
    IllegalCharacter { ch: char, span: Span },
    #[error("expected {}, found {found}", expected.join(" or "))]
    Syntax {
        span: Span,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown ordinal `{word}` (supported: first to tenth)")]
    UnknownOrdinal { word: String, span: Span },
    #[error("empty list")]
    EmptyList { span: Span },
    #[error("`it is necessary that` must start a sentence")]
    NestedNecessity { span: Span },
}

impl FrontendError {
    pub fn span(&self) -> Span {
        match self {
            FrontendError::UnterminatedString { span }
            | FrontendError::IllegalCharacter { span, .. }
            | FrontendError::Syntax { span, .. }
            | FrontendError::UnknownOrdinal { span, .. }
            | FrontendError::EmptyList { span }
            | FrontendError::NestedNecessity { span } => *span,
        }
    }
}

/// Tokenize, normalize and parse in one step.
pub fn parse_text(text: &str) -> Result<QueryAst, FrontendError> {
    parse_query(&normalize(&tokenize(text)?))
}

/// Like [`parse_text`], also returning each sentence's source span.
pub fn parse_text_with_spans(text: &str) -> Result<(QueryAst, Vec<Span>), FrontendError> {
    parse_query_with_spans(&normalize(&tokenize(text)?))
}
