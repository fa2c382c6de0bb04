//! Lowering from the English AST to a boolean query IR.

mod ir;
mod logic;
mod lower;

use thiserror::Error;

use crate::registry::RegistryError;

pub use ir::{quote, BoolExpr, Call, Decl, QlExpr, QueryIR};
pub use logic::{apply_necessity, desugar_implication, expand_membership, simplify};
pub use lower::{lower, lower_with_warnings, resolve_exp, LowerError, Lowering, Warning};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error("unknown attribute `{word}` (known: {})", known.join(", "))]
    UnknownAttribute { word: String, known: Vec<String> },
    #[error("`{0}` is not declared by an invocation or type assumption")]
    UndeclaredSubject(String),
    #[error("`{0}` is declared twice with different meanings")]
    DuplicateDeclaration(String),
    #[error("attribute `{0}` takes no ordinal")]
    OrdinalNotAllowed(String),
    #[error("attribute `{0}` needs an ordinal such as `first`")]
    MissingOrdinal(String),
    #[error("empty list")]
    EmptyList,
    #[error("unknown type noun `{0}`")]
    UnknownType(String),
    #[error("type assumption on `{0}` must be a top-level statement about a name")]
    MisplacedAssumption(String),
    #[error("`it is necessary that` must start a sentence")]
    NestedNecessity,
}

impl From<RegistryError> for SemanticError {
    fn from(err: RegistryError) -> Self {
        match err {
            RegistryError::UnknownAttribute { word, known } => {
                SemanticError::UnknownAttribute { word, known }
            }
            // lookups only ever fail with UnknownAttribute
            other => SemanticError::UnknownAttribute {
                word: other.to_string(),
                known: Vec::new(),
            },
        }
    }
}
