//! Bunch values and operators, prospective-value and weakest-precondition
//! semantics for a small guarded-command language, least fixpoints of
//! bunch transformers, and the surface syntax.

pub mod arbitrary;
pub mod ast;
pub mod boolbunch;
pub mod corpus;
pub mod bunch;
pub mod error;
pub mod eval;
pub mod fixpoint;
pub mod pv;
pub mod relations;
pub mod syntax;
pub mod types;
pub mod value;
pub mod wp;

pub use ast::{Cmd, Expr, Pred};
pub use bunch::{Bunch, Env};
pub use error::{Error, Result};
pub use eval::Evaluator;
pub use types::{EnumBounds, GivenSet, TypeTag};
pub use value::Value;
