//! Compile controlled-English static analysis queries to CodeQL.
//!
//! ```
//! let reg = cnlql::registry::builtin_crypto_profile();
//! let ql = cnlql::compile("An object of Cipher invokes init.", &reg, &Default::default()).unwrap();
//! assert!(ql.starts_with("from MethodAccess init\n"));
//! ```

pub mod cli;
pub mod frontend;
pub mod metrics;
pub mod patterns;
pub mod qlgen;
pub mod registry;
pub mod semantics;

use thiserror::Error;

use frontend::{FrontendError, QueryAst, Span};
use qlgen::RenderOptions;
use registry::Registry;
use semantics::{LowerError, QueryIR, Warning};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error("{error}")]
    Lower { error: LowerError, span: Span },
}

impl CompileError {
    pub fn span(&self) -> Span {
        match self {
            CompileError::Frontend(e) => e.span(),
            CompileError::Lower { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    pub ast: QueryAst,
    pub ir: QueryIR,
    /// Each warning with the span of the sentence it came from.
    pub warnings: Vec<(Warning, Span)>,
}

/// Parses and lowers `text`.
pub fn compile_ir(text: &str, reg: &Registry) -> Result<Compiled, CompileError> {
    let (ast, spans) = frontend::parse_text_with_spans(text)?;
    let span_of = |i: usize| spans.get(i).copied().unwrap_or(Span::new(0, text.len()));
    let lowering =
        semantics::lower_with_warnings(&ast, reg).map_err(|error| CompileError::Lower {
            span: span_of(error.sentence),
            error,
        })?;
    let warnings = lowering
        .warnings
        .into_iter()
        .map(|w| {
            let span = span_of(w.sentence);
            (w, span)
        })
        .collect();
    Ok(Compiled {
        ast,
        ir: lowering.ir,
        warnings,
    })
}

/// Parses, lowers and renders `text` to CodeQL.
pub fn compile(text: &str, reg: &Registry, opts: &RenderOptions) -> Result<String, CompileError> {
    Ok(qlgen::render(&compile_ir(text, reg)?.ir, opts))
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = text.get(..offset).unwrap_or(text);
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}
