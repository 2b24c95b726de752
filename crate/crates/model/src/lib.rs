//! A finite denotational model of bunch theory over one given set, and
//! mechanical validation of its axioms by enumerating environments.
//!
//! Denotations live in a small host set theory ([`sem`]). [`den::Model`]
//! gives value and truth denotations of source terms ([`term`]);
//! [`axioms::validate_axioms`] and [`lemmas::lemma_suite`] check the axiom
//! battery and the supporting host lemmas.

pub mod axioms;
pub mod den;
pub mod lemmas;
pub mod report;
pub mod sem;
pub mod term;

pub use axioms::{validate_axioms, validate_axioms_with, Universe};
pub use den::{ChoiceMode, Model, ModelError, SemEnv};
pub use lemmas::lemma_suite;
pub use report::{Group, Line, Outcome, Report};
pub use sem::{SemSet, SemVal, Ty};
pub use term::{Pred, Term};
