//! Neighbouring explicit substitution calculi and their translations.

pub mod engine;
pub mod ls;
pub mod lsig;
pub mod lu;

use crate::expr::SuspEnv;

/// An environment together with its old and new embedding levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnvTriple {
    pub ol: usize,
    pub nl: usize,
    pub env: SuspEnv,
}
