//! The simplified suspension calculus: an explicit substitution lambda calculus
//! with environment merging, plus tooling to test its metatheory.

pub mod bench;
pub mod bridges;
pub mod env;
pub mod error;
pub mod expr;
pub mod gen;
pub mod oracle;
pub mod order;
pub mod rewrite;
pub mod suites;
pub mod syntax;
pub mod trace;

pub use error::{monus, Error, Result};
pub use expr::{EnvItem, ExprRef, Path, SuspEnv, SuspExpr, SuspTerm};
