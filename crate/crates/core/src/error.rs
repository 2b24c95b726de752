use thiserror::Error;

use crate::syntax::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("{0} needs a type annotation")]
    NeedsAnnotation(String),
    #[error("cardinality of an improper bunch is undefined")]
    UndefinedCardinality,
    #[error("cannot enumerate {0}")]
    Enumeration(String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("state escapes the space: {0}")]
    StateEscape(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

impl Error {
    pub fn mismatch(expected: impl ToString, found: impl ToString) -> Self {
        Error::TypeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
